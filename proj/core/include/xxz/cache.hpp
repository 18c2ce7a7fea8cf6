#pragma once

#include "xxz/quadrature.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace xxz {

// Identity of a cached solve: a kind tag plus named numeric fields. The
// on-disk name is the FNV-1a hash of the canonical rendering of the key.
struct CacheKey {
    std::string kind;
    std::vector<std::pair<std::string, double>> fields;

    std::string canonical() const;
    std::uint64_t hash() const;
};

struct CacheRecord {
    std::vector<std::pair<std::string, double>> meta;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<cplx> values;

    std::optional<double> meta_value(const std::string& name) const;
};

struct CacheEntryInfo {
    std::filesystem::path path;
    std::string kind;
    std::uintmax_t bytes = 0;
};

// One JSON file per solve; writes go to a temporary file in the same
// directory followed by a rename, so concurrent readers never observe a
// partial record.
class DiskCache {
public:
    explicit DiskCache(std::filesystem::path dir);

    // Explicit directory wins; otherwise XXZ_CACHE_DIR; otherwise no cache.
    static std::optional<DiskCache> resolve(const std::optional<std::filesystem::path>& explicit_dir);

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path path_for(const CacheKey& key) const;

    std::optional<CacheRecord> load(const CacheKey& key) const;
    void store(const CacheKey& key, const CacheRecord& record) const;

    std::vector<CacheEntryInfo> list() const;
    std::size_t clear() const;

private:
    std::filesystem::path dir_;
};

} // namespace xxz
