#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mhdlab/state.hpp"

namespace mhdlab {

// Layout (little-endian):
//   0  char[4] "MHD2"
//   4  u32     version (1)
//   8  u32     nx
//  12  u32     ny
//  16  f64     lx
//  24  f64     ly
//  32  f64[nx*ny] u, then v, then psi; each row-major with y fastest.
inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 32;

class SnapshotError : public std::runtime_error {
 public:
  SnapshotError(const std::string& what, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

std::vector<std::uint8_t> encode_snapshot(const State& state);
/// Decodes a snapshot; the returned State has t = 1 and dealiased fields.
State decode_snapshot(std::span<const std::uint8_t> bytes);

void write_snapshot(const std::filesystem::path& path, const State& state);
State read_snapshot(const std::filesystem::path& path);

}  // namespace mhdlab
