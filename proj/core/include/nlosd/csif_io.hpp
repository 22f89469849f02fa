#pragma once

#include <cstdint>
#include <fstream>
#include <string>

#include "nlosd/csi.hpp"
#include "nlosd/system.hpp"

namespace nlosd {

/// CSIF binary dataset layout, little-endian throughout:
///   magic "CSIF" | version u16 | N u32 | M u32 | frame count u32 |
///   f_c f64 | delta f f64 | T f64 | mask, packed bits LSB-first |
///   frames: N x M interleaved (re, im) float32, row-major, no per-frame header.
struct CsifHeader {
  std::uint16_t version = 1;
  std::uint32_t subcarrier_count = 0;   // N
  std::uint32_t symbol_count = 0;       // M
  std::uint32_t frame_count = 0;
  double carrier_frequency_hz = 0.0;
  double subcarrier_spacing_hz = 0.0;
  double symbol_duration_s = 0.0;
  SymbolMask mask;
};

/// Sequential CSIF writer; the frame count is fixed up front and enforced.
class CsifWriter {
 public:
  CsifWriter(const std::string& path, const SystemConfig& cfg, std::uint32_t frame_count);
  ~CsifWriter();

  void append(const CsiFrame& frame);
  /// Flushes and verifies that exactly frame_count frames were appended.
  void finish();

 private:
  std::ofstream out_;
  std::string path_;
  std::uint32_t expected_ = 0;
  std::uint32_t written_ = 0;
  std::uint32_t rows_ = 0;
  std::uint32_t cols_ = 0;
  SymbolMask mask_;
  bool finished_ = false;
};

/// Random-access CSIF reader. Frames are fixed-size records.
class CsifReader {
 public:
  explicit CsifReader(const std::string& path);

  const CsifHeader& header() const { return header_; }
  std::size_t frame_count() const { return header_.frame_count; }

  /// Reads frame i; timestamp is reconstructed as i * frame_duration_s.
  CsiFrame frame(std::size_t index, double frame_duration_s = 10e-3);

  /// Throws FormatError when the header disagrees with cfg.
  void check_compatible(const SystemConfig& cfg) const;

 private:
  std::ifstream in_;
  std::string path_;
  CsifHeader header_;
  std::streamoff data_offset_ = 0;
};

void write_csif(const std::string& path, const SystemConfig& cfg,
                const std::vector<CsiFrame>& frames);

}  // namespace nlosd
