#include "xxz/cache.hpp"

#include "xxz/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace xxz {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num17(double x)
{
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

// nlohmann's default float rendering is shortest-round-trip; records are
// written with an explicit 17-significant-digit formatter instead.
void write_number(std::ostream& os, double x)
{
    if (!std::isfinite(x)) fail(ErrorKind::invalid_argument, "cache: non-finite value");
    os << num17(x);
}

void write_array(std::ostream& os, const std::vector<double>& v)
{
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        write_number(os, v[i]);
    }
    os << "]";
}

} // namespace

std::string CacheKey::canonical() const
{
    std::string s = kind;
    for (const auto& [name, value] : fields) s += "|" + name + "=" + num17(value);
    return s;
}

std::uint64_t CacheKey::hash() const
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::optional<double> CacheRecord::meta_value(const std::string& name) const
{
    for (const auto& [k, v] : meta)
        if (k == name) return v;
    return std::nullopt;
}

DiskCache::DiskCache(fs::path dir) : dir_(std::move(dir)) {}

std::optional<DiskCache> DiskCache::resolve(const std::optional<fs::path>& explicit_dir)
{
    if (explicit_dir && !explicit_dir->empty()) return DiskCache(*explicit_dir);
    if (const char* env = std::getenv("XXZ_CACHE_DIR"); env && *env) return DiskCache(env);
    return std::nullopt;
}

fs::path DiskCache::path_for(const CacheKey& key) const
{
    std::ostringstream os;
    os << key.kind << "-" << std::hex << std::setw(16) << std::setfill('0') << key.hash() << ".json";
    return dir_ / os.str();
}

std::optional<CacheRecord> DiskCache::load(const CacheKey& key) const
{
    const fs::path p = path_for(key);
    std::ifstream in(p);
    if (!in) return std::nullopt;
    json j;
    try {
        in >> j;
    } catch (const json::exception&) {
        return std::nullopt;  // unreadable record: treat as a miss
    }
    if (!j.contains("meta") || j["meta"].value("key", std::string{}) != key.canonical())
        return std::nullopt;

    CacheRecord rec;
    for (auto it = j["meta"].begin(); it != j["meta"].end(); ++it)
        if (it.value().is_number()) rec.meta.emplace_back(it.key(), it.value().get<double>());
    rec.nodes = j.at("nodes").get<std::vector<double>>();
    rec.weights = j.at("weights").get<std::vector<double>>();
    const auto re = j.at("values").get<std::vector<double>>();
    std::vector<double> im(re.size(), 0.0);
    if (j.contains("values_imag")) im = j["values_imag"].get<std::vector<double>>();
    if (im.size() != re.size() || rec.nodes.size() != re.size()) return std::nullopt;
    rec.values.resize(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) rec.values[i] = {re[i], im[i]};
    return rec;
}

void DiskCache::store(const CacheKey& key, const CacheRecord& record) const
{
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) return;  // caching is best effort

    std::ostringstream os;
    os << "{\"meta\":{\"kind\":" << json(key.kind).dump() << ",\"key\":" << json(key.canonical()).dump();
    for (const auto& [name, value] : record.meta) {
        os << "," << json(name).dump() << ":";
        write_number(os, value);
    }
    os << "},\"nodes\":";
    write_array(os, record.nodes);
    os << ",\"weights\":";
    write_array(os, record.weights);
    std::vector<double> re(record.values.size()), im(record.values.size());
    bool complex_values = false;
    for (std::size_t i = 0; i < re.size(); ++i) {
        re[i] = record.values[i].real();
        im[i] = record.values[i].imag();
        complex_values = complex_values || im[i] != 0.0;
    }
    os << ",\"values\":";
    write_array(os, re);
    if (complex_values) {
        os << ",\"values_imag\":";
        write_array(os, im);
    }
    os << "}\n";

    const fs::path target = path_for(key);
    std::random_device rd;
    const fs::path tmp = target.string() + ".tmp" + std::to_string(rd());
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) return;
        out << os.str();
        if (!out) {
            fs::remove(tmp, ec);
            return;
        }
    }
    fs::rename(tmp, target, ec);
    if (ec) fs::remove(tmp, ec);
}

std::vector<CacheEntryInfo> DiskCache::list() const
{
    std::vector<CacheEntryInfo> out;
    std::error_code ec;
    if (!fs::is_directory(dir_, ec)) return out;
    for (const auto& e : fs::directory_iterator(dir_, ec)) {
        if (!e.is_regular_file() || e.path().extension() != ".json") continue;
        CacheEntryInfo info;
        info.path = e.path();
        const std::string stem = e.path().stem().string();
        info.kind = stem.substr(0, stem.rfind('-'));
        info.bytes = e.file_size(ec);
        out.push_back(std::move(info));
    }
    std::sort(out.begin(), out.end(),
              [](const CacheEntryInfo& a, const CacheEntryInfo& b) { return a.path < b.path; });
    return out;
}

std::size_t DiskCache::clear() const
{
    std::size_t n = 0;
    std::error_code ec;
    for (const auto& e : list())
        if (fs::remove(e.path, ec)) ++n;
    return n;
}

} // namespace xxz
