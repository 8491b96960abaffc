#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "desmooth/dist.hpp"

namespace desmooth {

// Distribution dump file: a flat carrier for per-context conditional
// distributions exported from an external model.
//
//   header (16 bytes, little-endian):
//     magic   "TSDD"
//     version u16
//     vocab_size u32
//     record_count u32
//     flags   u16
//   records (record_count of):
//     context_id u32
//     probs      vocab_size x f32
inline constexpr char kDumpMagic[4] = {'T', 'S', 'D', 'D'};
inline constexpr std::uint16_t kDumpVersion = 1;

struct DumpFormatError : std::runtime_error {
  DumpFormatError(const std::string& msg, std::size_t byte_offset,
                  std::optional<std::size_t> record_index = std::nullopt);

  std::size_t byte_offset;
  std::optional<std::size_t> record_index;
};

struct DumpRecord {
  std::uint32_t context_id = 0;
  Dist dist;
};

// Streams records in file order. Probabilities are validated (no NaN, no
// negatives, sum within 1e-4 of 1) and renormalized on load.
class DumpReader {
 public:
  explicit DumpReader(const std::filesystem::path& path);

  std::uint32_t vocab_size() const { return vocab_size_; }
  std::uint32_t record_count() const { return record_count_; }
  std::uint16_t flags() const { return flags_; }

  std::optional<DumpRecord> next();

 private:
  std::ifstream in_;
  std::string path_;
  std::uint32_t vocab_size_ = 0;
  std::uint32_t record_count_ = 0;
  std::uint16_t flags_ = 0;
  std::uint32_t read_ = 0;
  std::size_t offset_ = 0;
};

void write_dump(const std::filesystem::path& path, std::uint32_t vocab_size,
                std::span<const DumpRecord> records, std::uint16_t flags = 0);

}  // namespace desmooth
