#pragma once

// On-disk cache of L-values at the circle nodes, one file per modulus.
//
// File L_<q>.bin, all integers and floats little-endian:
//   u32 magic "MOLL", u32 version, u64 q, u64 key, u64 count,
//   then count (re, im) pairs of f64.
// For a family the values are stored character by character in enumeration
// order, M node values each. The key hashes everything that changes the
// values (AFEConfig, radius, node count), so a lookup only hits on an exact
// match.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mollified/lfunction.hpp"

namespace mollified::cache {

inline constexpr std::uint32_t kMagic = 0x4C4C4F4DU;  // bytes 'M' 'O' 'L' 'L'
inline constexpr std::uint32_t kVersion = 1;
inline constexpr const char* kEnvironmentVariable = "MOLLIFIED_CACHE_DIR";

/// Key for family node values.
std::uint64_t family_key(const lfunction::AFEConfig& cfg, double radius, unsigned nodes);

struct Entry {
  std::uint64_t q = 0;
  std::uint64_t key = 0;
  std::uint64_t count = 0;
  std::uintmax_t bytes = 0;
  bool valid = false;
  std::filesystem::path path;
};

class LValueCache {
 public:
  explicit LValueCache(std::filesystem::path directory);

  /// Explicit directory if given, else $MOLLIFIED_CACHE_DIR, else
  /// $XDG_CACHE_HOME/mollified, else $HOME/.cache/mollified, else
  /// ./.mollified-cache.
  static std::filesystem::path resolve_directory(const std::optional<std::string>& explicit_dir);

  const std::filesystem::path& directory() const { return dir_; }
  std::filesystem::path file_for(std::uint64_t q) const;

  /// Stored values when the file exists with this q and key. A corrupt or
  /// truncated file is a miss with a warning.
  std::optional<std::vector<std::complex<double>>> get(std::uint64_t q, std::uint64_t key) const;

  /// Writes to a temporary file and renames it into place. Writers are
  /// serialized.
  void put(std::uint64_t q, std::uint64_t key, std::span<const std::complex<double>> values) const;

  /// Removes the file for q; true if one existed.
  bool clear(std::uint64_t q) const;
  /// Removes every L_<q>.bin; returns how many.
  std::size_t clear_all() const;

  std::vector<Entry> list() const;

 private:
  std::filesystem::path dir_;
  mutable std::mutex write_mutex_;
};

}  // namespace mollified::cache
