#ifndef TRAITTOPICS_UTIL_HPP
#define TRAITTOPICS_UTIL_HPP

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace traittopics {

// Dense row-major matrix. Plain storage, no algebra.
template <typename T>
struct Grid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<T> data;

    Grid() = default;
    Grid(std::size_t r, std::size_t c, T fill = T{}) : rows(r), cols(c), data(r * c, fill) {}

    T& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const T& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    T* row(std::size_t r) { return data.data() + r * cols; }
    const T* row(std::size_t r) const { return data.data() + r * cols; }

    bool operator==(const Grid&) const = default;
};

// Shortest decimal representation that round-trips exactly.
// Used everywhere a double is written to a file, so outputs are
// byte-stable across reruns.
std::string format_double(double v);

// 64-bit FNV-1a, hex encoded. Output digests in manifests are for
// change detection, not security.
std::string fnv1a64_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// mkdtemp wrapper; caller owns cleanup.
std::filesystem::path make_temp_dir(const std::string& prefix);

std::string lowercase_ascii(std::string_view s);

// Counter-based RNG: deterministic, splittable by construction.
// One splitmix64 step; used to derive independent seeds for sub-runs.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace traittopics

#endif
