#pragma once

// Binary field snapshot: a 64-byte ASCII header
//
//   "BEQT2D\n" then "<version> <n> <t>" padded with spaces, byte 63 = '\n'
//
// followed by u1, u2, p, q as n*n little-endian IEEE-754 doubles, row-major.
// t is written in shortest round-trip form, so reading restores it exactly.

#include <optional>
#include <stdexcept>
#include <string>

#include "nematic/fields.hpp"

namespace nematic::snapshot {

inline constexpr int kVersion = 1;
inline constexpr std::size_t kHeaderBytes = 64;

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string encode(const SimState& state);
// Throws SnapshotError on bad magic, version, header or payload size. When
// `expected` is given, a different grid size is rejected (no resampling).
SimState decode(const std::string& bytes, std::optional<Grid> expected = std::nullopt);

void write_snapshot(const std::string& path, const SimState& state);
SimState read_snapshot(const std::string& path, std::optional<Grid> expected = std::nullopt);

}  // namespace nematic::snapshot
