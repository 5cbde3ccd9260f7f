#include "mhdlab/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>

namespace mhdlab {

static_assert(std::endian::native == std::endian::little,
              "snapshot codec assumes a little-endian host");

SnapshotError::SnapshotError(const std::string& what, std::size_t offset)
    : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
      offset_(offset) {}

namespace {

template <class T>
void put(std::vector<std::uint8_t>& out, T value) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
  out.insert(out.end(), p, p + sizeof(T));
}

template <class T>
T get(std::span<const std::uint8_t> in, std::size_t offset) {
  T value;
  std::memcpy(&value, in.data() + offset, sizeof(T));
  return value;
}

void put_field(std::vector<std::uint8_t>& out, const SpectralField& f) {
  const PhysicalField p = f.to_physical();
  for (double x : p.samples()) put(out, x);
}

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const State& state) {
  const Grid2D& g = state.grid();
  std::vector<std::uint8_t> out;
  out.reserve(kSnapshotHeaderBytes + 3 * g.physical_size() * sizeof(double));
  out.insert(out.end(), {'M', 'H', 'D', '2'});
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.nx()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.ny()));
  put<double>(out, g.lx());
  put<double>(out, g.ly());
  put_field(out, state.u);
  put_field(out, state.v);
  put_field(out, state.psi);
  return out;
}

State decode_snapshot(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kSnapshotHeaderBytes) {
    throw SnapshotError("truncated header", bytes.size());
  }
  if (std::memcmp(bytes.data(), "MHD2", 4) != 0) throw SnapshotError("bad magic", 0);
  const auto version = get<std::uint32_t>(bytes, 4);
  if (version != kSnapshotVersion) {
    throw SnapshotError("unsupported version " + std::to_string(version), 4);
  }
  const auto nx = get<std::uint32_t>(bytes, 8);
  const auto ny = get<std::uint32_t>(bytes, 12);
  const auto lx = get<double>(bytes, 16);
  const auto ly = get<double>(bytes, 24);

  auto bad_size = [](std::uint32_t n) { return n < 4 || n % 2 != 0 || n > (1u << 16); };
  if (bad_size(nx)) throw SnapshotError("invalid nx " + std::to_string(nx), 8);
  if (bad_size(ny)) throw SnapshotError("invalid ny " + std::to_string(ny), 12);
  if (!(lx > 0.0) || !std::isfinite(lx)) throw SnapshotError("invalid lx", 16);
  if (!(ly > 0.0) || !std::isfinite(ly)) throw SnapshotError("invalid ly", 24);

  std::optional<Grid2D> grid;
  try {
    grid.emplace(static_cast<int>(nx), static_cast<int>(ny), lx, ly);
  } catch (const std::invalid_argument& e) {
    throw SnapshotError(std::string("invalid grid: ") + e.what(), 8);
  }

  const std::size_t n = grid->physical_size();
  const std::size_t expected = kSnapshotHeaderBytes + 3 * n * sizeof(double);
  if (bytes.size() != expected) {
    throw SnapshotError("payload size " + std::to_string(bytes.size()) + " != expected " +
                            std::to_string(expected),
                        std::min(bytes.size(), expected));
  }

  State s(*grid);
  SpectralField* fields[3] = {&s.u, &s.v, &s.psi};
  std::size_t offset = kSnapshotHeaderBytes;
  for (SpectralField* f : fields) {
    PhysicalField p(*grid);
    auto samples = p.samples();
    for (std::size_t k = 0; k < n; ++k, offset += sizeof(double)) {
      samples[k] = get<double>(bytes, offset);
      if (!std::isfinite(samples[k])) throw SnapshotError("non-finite sample", offset);
    }
    *f = p.to_dealiased();
  }
  return s;
}

void write_snapshot(const std::filesystem::path& path, const State& state) {
  const auto bytes = encode_snapshot(state);
  // Write to a sibling temp file and rename so readers never see partial files.
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open snapshot for writing: " + tmp.string());
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

State read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw SnapshotError("cannot open " + path.string(), 0);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                  std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

}  // namespace mhdlab
