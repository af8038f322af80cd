#include "mollified/cache.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <system_error>
#include <thread>

#include "mollified/diagnostics.hpp"

namespace mollified::cache {

namespace {

constexpr std::size_t kHeaderBytes = 4 + 4 + 8 + 8 + 8;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
std::uint64_t get_le(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

struct Header {
  std::uint32_t magic = 0;
  std::uint32_t version = 0;
  std::uint64_t q = 0;
  std::uint64_t key = 0;
  std::uint64_t count = 0;
};

Header parse_header(const unsigned char* p) {
  Header h;
  h.magic = static_cast<std::uint32_t>(get_le(p, 4));
  h.version = static_cast<std::uint32_t>(get_le(p + 4, 4));
  h.q = get_le(p + 8, 8);
  h.key = get_le(p + 16, 8);
  h.count = get_le(p + 24, 8);
  return h;
}

std::optional<std::uint64_t> modulus_from_name(const std::filesystem::path& p) {
  const std::string name = p.filename().string();
  if (name.size() < 7 || name.rfind("L_", 0) != 0 || name.substr(name.size() - 4) != ".bin") return std::nullopt;
  const std::string digits = name.substr(2, name.size() - 6);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
  return std::stoull(digits);
}

}  // namespace

std::uint64_t family_key(const lfunction::AFEConfig& cfg, double radius, unsigned nodes) {
  std::uint64_t h = cfg.hash();
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 0x100000001b3ULL;
    }
  };
  mix(std::bit_cast<std::uint64_t>(radius));
  mix(nodes);
  return h;
}

LValueCache::LValueCache(std::filesystem::path directory) : dir_(std::move(directory)) {
  if (dir_.empty()) throw std::invalid_argument("LValueCache: empty directory");
}

std::filesystem::path LValueCache::resolve_directory(const std::optional<std::string>& explicit_dir) {
  if (explicit_dir && !explicit_dir->empty()) return *explicit_dir;
  if (const char* env = std::getenv(kEnvironmentVariable); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "mollified";
  if (const char* home = std::getenv("HOME"); home && *home)
    return std::filesystem::path(home) / ".cache" / "mollified";
  return ".mollified-cache";
}

std::filesystem::path LValueCache::file_for(std::uint64_t q) const {
  return dir_ / ("L_" + std::to_string(q) + ".bin");
}

std::optional<std::vector<std::complex<double>>> LValueCache::get(std::uint64_t q, std::uint64_t key) const {
  const auto path = file_for(q);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;

  std::array<unsigned char, kHeaderBytes> raw{};
  if (!in.read(reinterpret_cast<char*>(raw.data()), raw.size())) {
    diagnostics::warn("cache: truncated header in " + path.string() + "; treating as a miss");
    return std::nullopt;
  }
  const Header h = parse_header(raw.data());
  if (h.magic != kMagic || h.version != kVersion || h.q != q) {
    diagnostics::warn("cache: bad header in " + path.string() + "; treating as a miss");
    return std::nullopt;
  }
  if (h.key != key) return std::nullopt;

  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec || h.count > (size - kHeaderBytes) / 16 || size != kHeaderBytes + 16 * h.count) {
    diagnostics::warn("cache: length mismatch in " + path.string() + "; treating as a miss");
    return std::nullopt;
  }
  std::vector<unsigned char> body(16 * h.count);
  if (!in.read(reinterpret_cast<char*>(body.data()), static_cast<std::streamsize>(body.size()))) {
    diagnostics::warn("cache: short read in " + path.string() + "; treating as a miss");
    return std::nullopt;
  }
  std::vector<std::complex<double>> values(h.count);
  for (std::size_t i = 0; i < h.count; ++i) {
    const double re = std::bit_cast<double>(get_le(body.data() + 16 * i, 8));
    const double im = std::bit_cast<double>(get_le(body.data() + 16 * i + 8, 8));
    values[i] = {re, im};
  }
  return values;
}

void LValueCache::put(std::uint64_t q, std::uint64_t key, std::span<const std::complex<double>> values) const {
  std::string out;
  out.reserve(kHeaderBytes + 16 * values.size());
  put_u32(out, kMagic);
  put_u32(out, kVersion);
  put_u64(out, q);
  put_u64(out, key);
  put_u64(out, values.size());
  for (const auto& z : values) {
    put_u64(out, std::bit_cast<std::uint64_t>(z.real()));
    put_u64(out, std::bit_cast<std::uint64_t>(z.imag()));
  }

  const std::lock_guard lock(write_mutex_);
  std::filesystem::create_directories(dir_);
  const auto target = file_for(q);
  const auto tid = std::hash<std::thread::id>{}(std::this_thread::get_id());
  auto temp = target;
  temp += ".tmp." + std::to_string(tid);
  {
    std::ofstream f(temp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cache: cannot write " + temp.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw std::runtime_error("cache: write failed for " + temp.string());
  }
  std::filesystem::rename(temp, target);
}

bool LValueCache::clear(std::uint64_t q) const {
  const std::lock_guard lock(write_mutex_);
  std::error_code ec;
  return std::filesystem::remove(file_for(q), ec);
}

std::size_t LValueCache::clear_all() const {
  const std::lock_guard lock(write_mutex_);
  std::size_t removed = 0;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir_, ec)) return 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (!entry.is_regular_file() || !modulus_from_name(entry.path())) continue;
    if (std::filesystem::remove(entry.path(), ec)) ++removed;
  }
  return removed;
}

std::vector<Entry> LValueCache::list() const {
  std::vector<Entry> entries;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir_, ec)) return entries;
  for (const auto& de : std::filesystem::directory_iterator(dir_)) {
    const auto q = de.is_regular_file() ? modulus_from_name(de.path()) : std::nullopt;
    if (!q) continue;
    Entry e;
    e.q = *q;
    e.path = de.path();
    e.bytes = de.file_size(ec);
    std::ifstream in(de.path(), std::ios::binary);
    std::array<unsigned char, kHeaderBytes> raw{};
    if (in.read(reinterpret_cast<char*>(raw.data()), raw.size())) {
      const Header h = parse_header(raw.data());
      e.key = h.key;
      e.count = h.count;
      e.valid = h.magic == kMagic && h.version == kVersion && h.q == *q && e.bytes == kHeaderBytes + 16 * h.count;
    }
    entries.push_back(e);
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.q < b.q; });
  return entries;
}

}  // namespace mollified::cache
