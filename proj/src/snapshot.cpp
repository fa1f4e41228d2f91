#include "nematic/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace nematic::snapshot {

namespace {

constexpr char kMagic[] = "BEQT2D\n";
constexpr std::size_t kMagicBytes = 7;

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t r = 0;
    for (int b = 0; b < 8; ++b) r |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
    return r;
  }
}

void append(std::string& out, const ScalarField& f) {
  for (std::size_t k = 0; k < f.size(); ++k) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(f[k]));
    char buf[8];
    std::memcpy(buf, &bits, 8);
    out.append(buf, 8);
  }
}

void extract(const std::string& in, std::size_t offset, ScalarField& f) {
  for (std::size_t k = 0; k < f.size(); ++k) {
    std::uint64_t bits;
    std::memcpy(&bits, in.data() + offset + 8 * k, 8);
    f[k] = std::bit_cast<double>(to_little(bits));
  }
}

}  // namespace

std::string encode(const SimState& state) {
  const int n = state.grid().n();
  char tbuf[64];
  const auto res = std::to_chars(tbuf, tbuf + sizeof tbuf, state.t);
  std::string line = std::to_string(kVersion) + " " + std::to_string(n) + " " + std::string(tbuf, res.ptr);
  std::string header(kMagic, kMagicBytes);
  header += line;
  if (header.size() > kHeaderBytes - 1) throw SnapshotError("snapshot header overflow");
  header.resize(kHeaderBytes - 1, ' ');
  header += '\n';

  std::string out = header;
  out.reserve(kHeaderBytes + 4 * 8 * state.grid().size());
  append(out, state.u.u1);
  append(out, state.u.u2);
  append(out, state.Q.p);
  append(out, state.Q.q);
  return out;
}

SimState decode(const std::string& bytes, std::optional<Grid> expected) {
  if (bytes.size() < kHeaderBytes) throw SnapshotError("snapshot truncated: header incomplete");
  if (bytes.compare(0, kMagicBytes, kMagic) != 0) throw SnapshotError("not a snapshot: bad magic");
  if (bytes[kHeaderBytes - 1] != '\n') throw SnapshotError("malformed snapshot header");
  std::istringstream fields(bytes.substr(kMagicBytes, kHeaderBytes - 1 - kMagicBytes));
  int version = 0;
  int n = 0;
  std::string tstr;
  if (!(fields >> version >> n >> tstr)) throw SnapshotError("malformed snapshot header");
  if (version != kVersion) {
    throw SnapshotError("unsupported snapshot version " + std::to_string(version));
  }
  double t = 0.0;
  const auto [ptr, ec] = std::from_chars(tstr.data(), tstr.data() + tstr.size(), t);
  if (ec != std::errc() || ptr != tstr.data() + tstr.size()) throw SnapshotError("malformed snapshot time");
  if (n < 8 || n % 2 != 0) throw SnapshotError("invalid snapshot grid size " + std::to_string(n));
  const Grid grid(n);
  if (expected && *expected != grid) {
    throw SnapshotError("snapshot grid n = " + std::to_string(n) + " does not match expected n = " +
                        std::to_string(expected->n()) + " (resampling is not supported)");
  }
  const std::size_t payload = 4 * 8 * grid.size();
  if (bytes.size() != kHeaderBytes + payload) {
    throw SnapshotError("snapshot size mismatch: expected " + std::to_string(kHeaderBytes + payload) +
                        " bytes, found " + std::to_string(bytes.size()));
  }
  SimState state(grid);
  state.t = t;
  const std::size_t block = 8 * grid.size();
  extract(bytes, kHeaderBytes, state.u.u1);
  extract(bytes, kHeaderBytes + block, state.u.u2);
  extract(bytes, kHeaderBytes + 2 * block, state.Q.p);
  extract(bytes, kHeaderBytes + 3 * block, state.Q.q);
  return state;
}

void write_snapshot(const std::string& path, const SimState& state) {
  const std::string bytes = encode(state);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw SnapshotError("failed writing " + path);
}

SimState read_snapshot(const std::string& path, std::optional<Grid> expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode(buf.str(), expected);
}

}  // namespace nematic::snapshot
