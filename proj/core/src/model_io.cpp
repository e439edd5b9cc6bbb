#include "vjface/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace vjface {

std::string format_hex(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hex(std::string_view text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  const std::string s(text);
  const bool hex = s.starts_with("0x") || s.starts_with("-0x");
  if (!hex) throw FormatError(0, "expected hex float, got '" + s + "'");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw FormatError(0, "malformed hex float '" + s + "'");
  return v;
}

namespace {

class Writer {
 public:
  template <typename... Ts>
  void line(const Ts&... parts) {
    bool first = true;
    ((out_ << (first ? "" : " ") << parts, first = false), ...);
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string hex_row(std::span<const double> values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s.push_back(' ');
    s += format_hex(values[i]);
  }
  return s;
}

class Reader {
 public:
  explicit Reader(std::string_view text) {
    std::size_t start = 0;
    while (start < text.size()) {
      auto nl = text.find('\n', start);
      if (nl == std::string_view::npos) nl = text.size();
      lines_.emplace_back(text.substr(start, nl - start));
      start = nl + 1;
    }
  }

  std::size_t line_number() const { return pos_; }

  /// Tokens of the next line, which must start with `keyword` and carry
  /// exactly `count` further tokens (any count when count < 0).
  std::vector<std::string> record(std::string_view keyword, int count) {
    if (pos_ >= lines_.size()) {
      throw FormatError(pos_ + 1, "unexpected end of file, expected '" + std::string(keyword) + "'");
    }
    ++pos_;
    std::istringstream in(lines_[pos_ - 1]);
    std::vector<std::string> tokens;
    for (std::string t; in >> t;) tokens.push_back(t);
    if (tokens.empty() || tokens.front() != keyword) {
      fail("expected '" + std::string(keyword) + "'");
    }
    tokens.erase(tokens.begin());
    if (count >= 0 && tokens.size() != static_cast<std::size_t>(count)) {
      fail("'" + std::string(keyword) + "' expects " + std::to_string(count) + " fields, got " +
           std::to_string(tokens.size()));
    }
    return tokens;
  }

  std::string raw_line() {
    if (pos_ >= lines_.size()) throw FormatError(pos_ + 1, "unexpected end of file");
    return lines_[pos_++];
  }

  [[noreturn]] void fail(const std::string& what) const { throw FormatError(pos_, what); }

  double real(const std::string& token) const {
    try {
      return parse_hex(token);
    } catch (const FormatError& e) {
      fail(e.what());
    }
  }

  long long integer(const std::string& token, long long lo, long long hi) const {
    char* end = nullptr;
    const long long v = std::strtoll(token.c_str(), &end, 10);
    if (token.empty() || end != token.c_str() + token.size()) fail("malformed integer '" + token + "'");
    if (v < lo || v > hi) fail("integer " + token + " out of range");
    return v;
  }

  std::size_t count(const std::string& token, std::size_t hi = 100'000'000) const {
    return static_cast<std::size_t>(integer(token, 0, static_cast<long long>(hi)));
  }

  void finish() {
    record("end", 0);
    while (pos_ < lines_.size()) {
      if (!lines_[pos_].empty()) {
        ++pos_;
        fail("trailing content after 'end'");
      }
      ++pos_;
    }
  }

 private:
  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
};

void write_header(Writer& w, std::string_view section) {
  w.line(std::string(model_magic) + std::string(model_version));
  w.line(section);
}

Cascade read_cascade(Reader& r) {
  Cascade c;
  c.window.base_size = static_cast<int>(r.integer(r.record("window", 1)[0], 8, 1 << 20));
  c.seed = static_cast<std::uint64_t>(std::strtoull(r.record("seed", 1)[0].c_str(), nullptr, 10));
  c.negatives_exhausted = r.integer(r.record("exhausted", 1)[0], 0, 1) != 0;

  const auto nf = r.count(r.record("features", 1)[0]);
  c.features.reserve(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    const auto t = r.record("feature", 5);
    HaarFeature f;
    try {
      f.kind = parse_haar_kind(t[0]);
    } catch (const FormatError& e) {
      r.fail(e.what());
    }
    f.x = static_cast<int>(r.integer(t[1], 0, c.window.base_size));
    f.y = static_cast<int>(r.integer(t[2], 0, c.window.base_size));
    f.unit_w = static_cast<int>(r.integer(t[3], 1, c.window.base_size));
    f.unit_h = static_cast<int>(r.integer(t[4], 1, c.window.base_size));
    if (!fits(f, c.window)) r.fail("feature does not fit the window");
    c.features.push_back(f);
  }

  const auto ns = r.count(r.record("stages", 1)[0]);
  for (std::size_t s = 0; s < ns; ++s) {
    const auto head = r.record("stage", 2);
    StrongClassifier stage;
    const auto nw = r.count(head[0]);
    stage.stage_threshold = r.real(head[1]);
    for (std::size_t k = 0; k < nw; ++k) {
      const auto t = r.record("weak", 4);
      WeakClassifier w;
      w.feature_index = r.count(t[0]);
      if (w.feature_index >= c.features.size()) r.fail("weak references a missing feature");
      w.threshold = r.real(t[1]);
      w.polarity = static_cast<int>(r.integer(t[2], -1, 1));
      if (w.polarity == 0) r.fail("polarity must be +1 or -1");
      w.alpha = r.real(t[3]);
      stage.weaks.push_back(w);
    }
    const auto m = r.record("meta", 4);
    c.training_meta.push_back(
        StageStats{r.real(m[0]), r.real(m[1]), r.real(m[2]), static_cast<std::uint64_t>(r.count(m[3]))});
    c.stages.push_back(std::move(stage));
  }
  r.finish();
  return c;
}

void read_values(Reader& r, std::string_view keyword, std::span<double> dst) {
  const auto t = r.record(keyword, static_cast<int>(dst.size()));
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = r.real(t[i]);
}

RecognizerModel read_recognizer(Reader& r) {
  RecognizerModel m;
  const auto d = r.record("descriptor", 6);
  try {
    m.descriptor.mode = parse_descriptor_mode(d[0]);
  } catch (const FormatError& e) {
    r.fail(e.what());
  }
  m.descriptor.crop_size = static_cast<int>(r.integer(d[1], 1, 1 << 16));
  m.descriptor.grid_rows = static_cast<int>(r.integer(d[2], 1, 1 << 16));
  m.descriptor.grid_cols = static_cast<int>(r.integer(d[3], 1, 1 << 16));
  m.descriptor.bins_per_cell = static_cast<int>(r.integer(d[4], 1, 256));
  m.descriptor.vector_length = r.count(d[5]);
  try {
    validate(m.descriptor);
  } catch (const DimensionError& e) {
    r.fail(e.what());
  }
  m.accept_threshold = r.real(r.record("accept", 1)[0]);

  const auto dims = r.record("network", 3);
  const auto n_in = r.count(dims[0], 1 << 20);
  const auto n_hidden = r.count(dims[1], 1 << 20);
  const auto n_out = r.count(dims[2], 63);
  if (n_in == 0 || n_hidden == 0 || n_out == 0) r.fail("network dimensions must be >= 1");
  if (n_in != m.descriptor.length()) r.fail("network input width differs from descriptor length");

  if (r.count(r.record("scaling", 1)[0]) != n_in) r.fail("scaling width differs from network input");
  m.scaling.min.resize(n_in);
  m.scaling.max.resize(n_in);
  for (std::size_t j = 0; j < n_in; ++j) {
    const auto t = r.record("range", 2);
    m.scaling.min[j] = r.real(t[0]);
    m.scaling.max[j] = r.real(t[1]);
  }

  m.network = Network::zeros(n_in, n_hidden, n_out);
  for (std::size_t h = 0; h < n_hidden; ++h) read_values(r, "w1", m.network.w1.row(h));
  read_values(r, "b1", m.network.b1);
  for (std::size_t o = 0; o < n_out; ++o) read_values(r, "w2", m.network.w2.row(o));
  read_values(r, "b2", m.network.b2);

  const auto nc = r.count(r.record("codes", 1)[0]);
  for (std::size_t k = 0; k < nc; ++k) {
    const auto t = r.record("code", 2);
    IdentityCode code{t[0], {}};
    try {
      code.bits = parse_bits(t[1]);
    } catch (const FormatError& e) {
      r.fail(e.what());
    }
    if (code.bits.size() != n_out) r.fail("code width differs from network output");
    m.codebook.push_back(std::move(code));
  }
  try {
    validate_codebook(m.codebook);
  } catch (const DimensionError& e) {
    r.fail(e.what());
  }
  r.finish();
  return m;
}

std::string slurp_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void dump_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace

std::string serialize(const Cascade& c) {
  Writer w;
  write_header(w, "CASCADE");
  w.line("window", c.window.base_size);
  w.line("seed", c.seed);
  w.line("exhausted", c.negatives_exhausted ? 1 : 0);
  w.line("features", c.features.size());
  for (const auto& f : c.features) w.line("feature", to_string(f.kind), f.x, f.y, f.unit_w, f.unit_h);
  w.line("stages", c.stages.size());
  for (std::size_t s = 0; s < c.stages.size(); ++s) {
    const auto& stage = c.stages[s];
    w.line("stage", stage.weaks.size(), format_hex(stage.stage_threshold));
    for (const auto& k : stage.weaks) {
      w.line("weak", k.feature_index, format_hex(k.threshold), k.polarity, format_hex(k.alpha));
    }
    const StageStats meta = s < c.training_meta.size() ? c.training_meta[s] : StageStats{};
    w.line("meta", format_hex(meta.tpr), format_hex(meta.fpr), format_hex(meta.cumulative_fpr),
           meta.negatives);
  }
  w.line("end");
  return w.str();
}

std::string serialize(const RecognizerModel& m) {
  Writer w;
  write_header(w, "RECOGNIZER");
  const auto& d = m.descriptor;
  w.line("descriptor", to_string(d.mode), d.crop_size, d.grid_rows, d.grid_cols, d.bins_per_cell,
         d.vector_length);
  w.line("accept", format_hex(m.accept_threshold));
  const auto& net = m.network;
  w.line("network", net.n_in(), net.n_hidden(), net.n_out());
  w.line("scaling", m.scaling.min.size());
  for (std::size_t j = 0; j < m.scaling.min.size(); ++j) {
    w.line("range", format_hex(m.scaling.min[j]), format_hex(m.scaling.max[j]));
  }
  for (std::size_t h = 0; h < net.n_hidden(); ++h) w.line("w1", hex_row(net.w1.row(h)));
  w.line("b1", hex_row(net.b1));
  for (std::size_t o = 0; o < net.n_out(); ++o) w.line("w2", hex_row(net.w2.row(o)));
  w.line("b2", hex_row(net.b2));
  w.line("codes", m.codebook.size());
  for (const auto& c : m.codebook) w.line("code", c.label, format_bits(c.bits));
  w.line("end");
  return w.str();
}

Model parse_model(std::string_view text) {
  Reader r(text);
  const std::string magic = r.raw_line();
  const std::string expected = std::string(model_magic) + std::string(model_version);
  if (magic != expected) {
    if (magic.starts_with(model_magic)) {
      throw VersionMismatchError("model format version '" + magic.substr(model_magic.size()) +
                                 "' is not supported (expected " + std::string(model_version) + ")");
    }
    throw FormatError(1, "missing " + expected + " magic");
  }
  const std::string section = r.raw_line();
  if (section == "CASCADE") return read_cascade(r);
  if (section == "RECOGNIZER") return read_recognizer(r);
  r.fail("unknown section '" + section + "'");
}

void save_model(const Cascade& cascade, const std::filesystem::path& path) {
  dump_text(path, serialize(cascade));
}

void save_model(const RecognizerModel& model, const std::filesystem::path& path) {
  dump_text(path, serialize(model));
}

Model load_model(const std::filesystem::path& path) { return parse_model(slurp_text(path)); }

Cascade load_cascade(const std::filesystem::path& path) {
  auto m = load_model(path);
  if (auto* c = std::get_if<Cascade>(&m)) return std::move(*c);
  throw FormatError(2, path.string() + " holds a recognizer, not a cascade");
}

RecognizerModel load_recognizer(const std::filesystem::path& path) {
  auto m = load_model(path);
  if (auto* c = std::get_if<RecognizerModel>(&m)) return std::move(*c);
  throw FormatError(2, path.string() + " holds a cascade, not a recognizer");
}

}  // namespace vjface
