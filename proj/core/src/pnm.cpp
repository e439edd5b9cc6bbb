#include "vjface/pnm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string_view>

namespace vjface {
namespace {

struct Header {
  std::string magic;
  int width = 0;
  int height = 0;
  std::size_t data_offset = 0;
};

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_uint(const char* what) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw FormatError(0, std::string("netpbm: expected ") + what);
    }
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > 1'000'000) throw FormatError(0, std::string("netpbm: ") + what + " too large");
    }
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }
  std::size_t size() const { return bytes_.size(); }
  std::uint8_t peek() const { return bytes_[pos_]; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

Header parse_header(std::span<const std::uint8_t> bytes, std::string_view expected_magic) {
  if (bytes.size() < 2) throw FormatError(0, "netpbm: truncated header");
  Header h;
  h.magic.assign(bytes.begin(), bytes.begin() + 2);
  if (h.magic != expected_magic) {
    throw FormatError(0, "netpbm: expected magic " + std::string(expected_magic) + ", got " +
                             h.magic);
  }
  HeaderReader r(bytes);
  r.advance(2);
  const long w = r.read_uint("width");
  const long hgt = r.read_uint("height");
  const long maxval = r.read_uint("maxval");
  if (w < 1 || hgt < 1) throw FormatError(0, "netpbm: dimensions must be >= 1");
  if (maxval != 255) throw FormatError(0, "netpbm: only maxval 255 is supported");
  if (r.pos() >= r.size() || !std::isspace(r.peek())) {
    throw FormatError(0, "netpbm: missing whitespace after maxval");
  }
  r.advance(1);
  h.width = static_cast<int>(w);
  h.height = static_cast<int>(hgt);
  h.data_offset = r.pos();
  return h;
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void dump(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for " + path.string());
}

std::vector<std::uint8_t> encode(std::string_view magic, int w, int h,
                                 std::span<const std::uint8_t> pixels) {
  const std::string header =
      std::string(magic) + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), pixels.begin(), pixels.end());
  return out;
}

}  // namespace

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
  const Header h = parse_header(bytes, "P5");
  const std::size_t n = static_cast<std::size_t>(h.width) * h.height;
  if (bytes.size() - h.data_offset < n) throw FormatError(0, "netpbm: truncated pixel data");
  const auto px = bytes.subspan(h.data_offset, n);
  return GrayImage(h.width, h.height, std::vector<std::uint8_t>(px.begin(), px.end()));
}

RgbImage decode_ppm(std::span<const std::uint8_t> bytes) {
  const Header h = parse_header(bytes, "P6");
  const std::size_t n = 3 * static_cast<std::size_t>(h.width) * h.height;
  if (bytes.size() - h.data_offset < n) throw FormatError(0, "netpbm: truncated pixel data");
  const auto px = bytes.subspan(h.data_offset, n);
  return RgbImage(h.width, h.height, std::vector<std::uint8_t>(px.begin(), px.end()));
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
  return encode("P5", img.width(), img.height(), img.data());
}

std::vector<std::uint8_t> encode_ppm(const RgbImage& img) {
  return encode("P6", img.width(), img.height(), img.data());
}

GrayImage read_pgm(const std::filesystem::path& path) { return decode_pgm(slurp(path)); }
RgbImage read_ppm(const std::filesystem::path& path) { return decode_ppm(slurp(path)); }

GrayImage read_gray(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
    return rgb_to_gray(decode_ppm(bytes));
  }
  return decode_pgm(bytes);
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  dump(path, encode_pgm(img));
}

void write_pgm(const std::filesystem::path& path, const BinaryImage& img) {
  std::vector<std::uint8_t> px(img.data().begin(), img.data().end());
  for (auto& v : px) v = v ? 255 : 0;
  dump(path, encode("P5", img.width(), img.height(), px));
}

void write_ppm(const std::filesystem::path& path, const RgbImage& img) {
  dump(path, encode_ppm(img));
}

}  // namespace vjface
