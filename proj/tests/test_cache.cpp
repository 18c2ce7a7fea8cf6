#include "xxz/cache.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

using namespace xxz;

TEST(Cache, StoreLoadListClear)
{
    const auto dir = std::filesystem::temp_directory_path() / "xxz_test_cache_unit";
    std::filesystem::remove_all(dir);
    DiskCache cache(dir);
    CacheKey key{"eps", {{"zeta", 0.3}, {"h", 1.25}}};
    EXPECT_FALSE(cache.load(key).has_value());
    CacheRecord rec;
    rec.meta = {{"q", 0.2}};
    rec.nodes = {-0.1, 0.1};
    rec.weights = {0.1, 0.1};
    rec.values = {cplx(1.0, 0.5), cplx(-2.0, 0.0)};
    cache.store(key, rec);
    const auto back = cache.load(key);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(back->values, rec.values);
    EXPECT_EQ(back->meta_value("q"), 0.2);
    EXPECT_EQ(cache.list().size(), 1u);
    EXPECT_EQ(cache.clear(), 1u);
    EXPECT_TRUE(cache.list().empty());
    std::filesystem::remove_all(dir);
}

TEST(Cache, KeyHashDependsOnFields)
{
    CacheKey a{"eps", {{"zeta", 0.3}}};
    CacheKey b{"eps", {{"zeta", 0.30000000001}}};
    EXPECT_NE(a.hash(), b.hash());
    EXPECT_EQ(a.hash(), CacheKey(a).hash());
}

TEST(Cache, Resolve)
{
    ::unsetenv("XXZ_CACHE_DIR");
    EXPECT_FALSE(DiskCache::resolve(std::nullopt).has_value());
    ::setenv("XXZ_CACHE_DIR", "/tmp/xxz_env_cache", 1);
    EXPECT_EQ(DiskCache::resolve(std::nullopt)->dir(), "/tmp/xxz_env_cache");
    EXPECT_EQ(DiskCache::resolve(std::filesystem::path("/tmp/x"))->dir(), "/tmp/x");
    ::unsetenv("XXZ_CACHE_DIR");
}
