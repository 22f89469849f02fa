#include "nlosd/csif_io.hpp"

#include <bit>
#include <cstring>
#include <sstream>

#include "nlosd/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "CSIF I/O assumes a little-endian host");
static_assert(sizeof(float) == 4 && sizeof(double) == 8);

namespace nlosd {

namespace {

constexpr char kMagic[4] = {'C', 'S', 'I', 'F'};
constexpr std::uint16_t kVersion = 1;

template <typename T>
void write_scalar(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_scalar(std::istream& in, const std::string& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw FormatError("truncated CSIF file '" + path + "'");
  return value;
}

std::vector<std::uint8_t> pack_bits(const std::vector<std::uint8_t>& bits) {
  std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  return bytes;
}

std::vector<std::uint8_t> unpack_bits(const std::vector<std::uint8_t>& bytes, std::size_t count) {
  std::vector<std::uint8_t> bits(count, 0);
  for (std::size_t i = 0; i < count; ++i) {
    bits[i] = (bytes[i / 8] >> (i % 8)) & 1u;
  }
  return bits;
}

}  // namespace

CsifWriter::CsifWriter(const std::string& path, const SystemConfig& cfg,
                       std::uint32_t frame_count)
    : out_(path, std::ios::binary), path_(path), expected_(frame_count) {
  if (!out_) throw FormatError("cannot open '" + path + "' for writing");
  cfg.validate();
  rows_ = static_cast<std::uint32_t>(cfg.subcarrier_count);
  cols_ = static_cast<std::uint32_t>(cfg.symbol_count_per_frame);
  mask_ = build_tdd_mask(cfg);

  out_.write(kMagic, 4);
  write_scalar(out_, kVersion);
  write_scalar(out_, rows_);
  write_scalar(out_, cols_);
  write_scalar(out_, expected_);
  write_scalar(out_, cfg.carrier_frequency_hz);
  write_scalar(out_, cfg.subcarrier_spacing_hz);
  write_scalar(out_, cfg.symbol_duration_s);
  const auto bytes = pack_bits(mask_.usable);
  out_.write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));
}

CsifWriter::~CsifWriter() = default;

void CsifWriter::append(const CsiFrame& frame) {
  if (finished_) throw FormatError("CsifWriter: append after finish");
  if (frame.rows != rows_ || frame.cols != cols_) {
    throw FormatError("CsifWriter: frame dimensions do not match header");
  }
  if (written_ >= expected_) throw FormatError("CsifWriter: more frames than declared");
  out_.write(reinterpret_cast<const char*>(frame.h.data()),
             static_cast<std::streamsize>(frame.h.size() * sizeof(std::complex<float>)));
  ++written_;
}

void CsifWriter::finish() {
  if (finished_) return;
  if (written_ != expected_) {
    std::ostringstream os;
    os << "CsifWriter: declared " << expected_ << " frames but wrote " << written_;
    throw FormatError(os.str());
  }
  out_.flush();
  if (!out_) throw FormatError("write failure on '" + path_ + "'");
  finished_ = true;
}

CsifReader::CsifReader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
  if (!in_) throw FormatError("cannot open '" + path + "'");
  char magic[4];
  in_.read(magic, 4);
  if (!in_ || std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError("'" + path + "' is not a CSIF file (bad magic)");
  }
  header_.version = read_scalar<std::uint16_t>(in_, path_);
  if (header_.version != kVersion) {
    throw FormatError("unsupported CSIF version " + std::to_string(header_.version));
  }
  header_.subcarrier_count = read_scalar<std::uint32_t>(in_, path_);
  header_.symbol_count = read_scalar<std::uint32_t>(in_, path_);
  header_.frame_count = read_scalar<std::uint32_t>(in_, path_);
  header_.carrier_frequency_hz = read_scalar<double>(in_, path_);
  header_.subcarrier_spacing_hz = read_scalar<double>(in_, path_);
  header_.symbol_duration_s = read_scalar<double>(in_, path_);
  if (header_.subcarrier_count == 0 || header_.symbol_count == 0) {
    throw FormatError("'" + path + "': zero-sized frame dimensions");
  }
  std::vector<std::uint8_t> bytes((header_.symbol_count + 7) / 8);
  in_.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!in_) throw FormatError("truncated CSIF file '" + path + "'");
  header_.mask.usable = unpack_bits(bytes, header_.symbol_count);
  header_.mask.period = SymbolMask::detect_period(header_.mask.usable);
  data_offset_ = in_.tellg();
}

CsiFrame CsifReader::frame(std::size_t index, double frame_duration_s) {
  if (index >= header_.frame_count) {
    throw FormatError("CSIF frame index out of range");
  }
  const std::size_t cells =
      static_cast<std::size_t>(header_.subcarrier_count) * header_.symbol_count;
  CsiFrame frame;
  frame.rows = header_.subcarrier_count;
  frame.cols = header_.symbol_count;
  frame.mask = header_.mask;
  frame.frame_index = index;
  frame.timestamp_s = static_cast<double>(index) * frame_duration_s;
  frame.h.resize(cells);
  in_.seekg(data_offset_ + static_cast<std::streamoff>(index) *
                               static_cast<std::streamoff>(cells * sizeof(std::complex<float>)));
  in_.read(reinterpret_cast<char*>(frame.h.data()),
           static_cast<std::streamsize>(cells * sizeof(std::complex<float>)));
  if (!in_) throw FormatError("truncated CSIF file '" + path_ + "'");
  return frame;
}

void CsifReader::check_compatible(const SystemConfig& cfg) const {
  const bool ok = header_.subcarrier_count == cfg.subcarrier_count &&
                  header_.symbol_count == cfg.symbol_count_per_frame &&
                  header_.carrier_frequency_hz == cfg.carrier_frequency_hz &&
                  header_.subcarrier_spacing_hz == cfg.subcarrier_spacing_hz &&
                  header_.symbol_duration_s == cfg.symbol_duration_s;
  if (!ok) {
    throw FormatError("CSIF header of '" + path_ + "' does not match the system config");
  }
}

void write_csif(const std::string& path, const SystemConfig& cfg,
                const std::vector<CsiFrame>& frames) {
  CsifWriter writer(path, cfg, static_cast<std::uint32_t>(frames.size()));
  for (const CsiFrame& f : frames) writer.append(f);
  writer.finish();
}

}  // namespace nlosd
