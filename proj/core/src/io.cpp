#include "mcgd/io.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mcgd {

static_assert(std::endian::native == std::endian::little,
              "binary containers assume a little-endian host");

namespace {

constexpr std::uint32_t kSignalVersion = 1;
constexpr std::uint32_t kBankVersion = 1;

class AtomicWriter {
 public:
  explicit AtomicWriter(const std::string& path) : path_(path), tmp_(path + ".tmp") {
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot open for writing: " + tmp_);
  }
  ~AtomicWriter() {
    if (!committed_) {
      out_.close();
      std::remove(tmp_.c_str());
    }
  }
  std::ostream& stream() { return out_; }
  void commit() {
    out_.flush();
    if (!out_) throw IoError("write failed: " + tmp_);
    out_.close();
    if (std::rename(tmp_.c_str(), path_.c_str()) != 0)
      throw IoError("cannot rename into place: " + path_);
    committed_ = true;
  }

 private:
  std::string path_, tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is, const std::string& path) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw IoError("truncated file: " + path);
  return v;
}

void put_magic(std::ostream& os, const char m[4]) { os.write(m, 4); }

void check_magic(std::istream& is, const char m[4], const std::string& path) {
  char buf[4];
  is.read(buf, 4);
  if (!is || std::memcmp(buf, m, 4) != 0) throw IoError("bad magic: " + path);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  return in;
}

void put_shape(std::ostream& os, const GridShape& s) {
  put<std::uint8_t>(os, static_cast<std::uint8_t>(s.rank));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(s.rows));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(s.cols));
}

GridShape get_shape(std::istream& is, const std::string& path) {
  GridShape s;
  s.rank = get<std::uint8_t>(is, path);
  s.rows = get<std::uint32_t>(is, path);
  s.cols = get<std::uint32_t>(is, path);
  try {
    s.validate();
  } catch (const ConfigError& e) {
    throw IoError(std::string("invalid shape in ") + path + ": " + e.what());
  }
  return s;
}

void put_complex_field(std::ostream& os, const ComplexField& f) {
  for (const auto& z : f.v) {
    put<double>(os, z.real());
    put<double>(os, z.imag());
  }
}

ComplexField get_complex_field(std::istream& is, GridShape shape, const std::string& path) {
  ComplexField f(shape);
  for (auto& z : f.v) {
    const double re = get<double>(is, path);
    const double im = get<double>(is, path);
    z = {re, im};
  }
  return f;
}

int skip_pgm_space(std::istream& is) {
  int c = is.get();
  while (c != EOF && (std::isspace(c) || c == '#')) {
    if (c == '#')
      while (c != EOF && c != '\n') c = is.get();
    c = is.get();
  }
  return c;
}

std::int64_t read_pgm_int(std::istream& is, const std::string& path) {
  int c = skip_pgm_space(is);
  if (c == EOF || !std::isdigit(c)) throw IoError("malformed PGM header: " + path);
  std::int64_t v = 0;
  while (c != EOF && std::isdigit(c)) {
    v = v * 10 + (c - '0');
    c = is.get();
  }
  if (c != EOF) is.unget();
  return v;
}

}  // namespace

void save_signal(const std::string& path, const PeriodicSignal& x) {
  x.shape.validate();
  AtomicWriter w(path);
  put_magic(w.stream(), "MSIG");
  put<std::uint32_t>(w.stream(), kSignalVersion);
  put_shape(w.stream(), x.shape);
  w.stream().write(reinterpret_cast<const char*>(x.v.data()),
                   static_cast<std::streamsize>(x.v.size() * sizeof(double)));
  w.commit();
}

PeriodicSignal load_signal(const std::string& path) {
  std::ifstream in = open_in(path);
  check_magic(in, "MSIG", path);
  if (get<std::uint32_t>(in, path) != kSignalVersion)
    throw IoError("unsupported signal version: " + path);
  const GridShape shape = get_shape(in, path);
  PeriodicSignal x(shape);
  in.read(reinterpret_cast<char*>(x.v.data()),
          static_cast<std::streamsize>(x.v.size() * sizeof(double)));
  if (!in) throw IoError("truncated file: " + path);
  return x;
}

void save_bank(const std::string& path, const FilterBank& bank) {
  bank.validate();
  AtomicWriter w(path);
  std::ostream& os = w.stream();
  put_magic(os, "MBNK");
  put<std::uint32_t>(os, kBankVersion);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(bank.kind));
  put_shape(os, bank.dims);
  put<std::int32_t>(os, bank.J);
  put<std::int32_t>(os, bank.Q);
  put<double>(os, bank.gamma);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(bank.bands.size()));
  for (const auto& b : bank.bands) {
    put<std::int32_t>(os, b.j);
    put<std::int32_t>(os, b.q);
    put_complex_field(os, b.hat);
  }
  put_complex_field(os, bank.low_pass);
  w.commit();
}

FilterBank load_bank(const std::string& path) {
  std::ifstream in = open_in(path);
  check_magic(in, "MBNK", path);
  if (get<std::uint32_t>(in, path) != kBankVersion)
    throw IoError("unsupported bank version: " + path);
  FilterBank bank;
  const auto kind = get<std::uint8_t>(in, path);
  if (kind > 2) throw IoError("unknown bank kind: " + path);
  bank.kind = static_cast<BankKind>(kind);
  bank.dims = get_shape(in, path);
  bank.J = get<std::int32_t>(in, path);
  bank.Q = get<std::int32_t>(in, path);
  bank.gamma = get<double>(in, path);
  const auto nbands = get<std::uint32_t>(in, path);
  bank.bands.reserve(nbands);
  for (std::uint32_t i = 0; i < nbands; ++i) {
    BandFilter b;
    b.j = get<std::int32_t>(in, path);
    b.q = get<std::int32_t>(in, path);
    b.hat = get_complex_field(in, bank.dims, path);
    bank.bands.push_back(std::move(b));
  }
  bank.low_pass = get_complex_field(in, bank.dims, path);
  try {
    bank.validate();
  } catch (const ConfigError& e) {
    throw IoError(std::string("invalid bank in ") + path + ": " + e.what());
  }
  return bank;
}

PgmImage read_pgm(const std::string& path) {
  std::ifstream in = open_in(path);
  char p = 0, five = 0;
  in.get(p).get(five);
  if (!in || p != 'P' || five != '5') throw IoError("not a binary PGM: " + path);
  PgmImage img;
  img.cols = read_pgm_int(in, path);
  img.rows = read_pgm_int(in, path);
  const std::int64_t maxval = read_pgm_int(in, path);
  if (img.cols <= 0 || img.rows <= 0) throw IoError("bad PGM size: " + path);
  if (maxval != 255) throw IoError("unsupported PGM maxval (want 255): " + path);
  in.get();  // single whitespace after maxval
  img.pixels.resize(static_cast<std::size_t>(img.rows * img.cols));
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (!in) throw IoError("truncated PGM: " + path);
  return img;
}

void write_pgm(const std::string& path, const PgmImage& img) {
  if (img.rows <= 0 || img.cols <= 0 ||
      img.pixels.size() != static_cast<std::size_t>(img.rows * img.cols))
    throw IoError("inconsistent PGM image");
  AtomicWriter w(path);
  w.stream() << "P5\n" << img.cols << ' ' << img.rows << "\n255\n";
  w.stream().write(reinterpret_cast<const char*>(img.pixels.data()),
                   static_cast<std::streamsize>(img.pixels.size()));
  w.commit();
}

PeriodicSignal standardize(const PgmImage& img, double* mean_out, double* std_out) {
  if (img.rows != img.cols) throw ConfigError("only square images are supported");
  PeriodicSignal x(GridShape::square(img.rows));
  double m = 0.0;
  for (auto p : img.pixels) m += p;
  m /= static_cast<double>(img.pixels.size());
  double var = 0.0;
  for (auto p : img.pixels) var += (p - m) * (p - m);
  var /= static_cast<double>(img.pixels.size());
  if (var <= 0.0) throw ConfigError("constant image cannot be standardized");
  const double s = std::sqrt(var);
  for (std::size_t i = 0; i < x.v.size(); ++i) x.v[i] = (img.pixels[i] - m) / s;
  if (mean_out) *mean_out = m;
  if (std_out) *std_out = s;
  return x;
}

PgmImage destandardize(const PeriodicSignal& x, double mean, double stddev) {
  if (x.shape.rank != 2) throw ConfigError("images are two-dimensional");
  PgmImage img;
  img.rows = x.shape.rows;
  img.cols = x.shape.cols;
  img.pixels.resize(x.v.size());
  for (std::size_t i = 0; i < x.v.size(); ++i) {
    const double p = std::round(x.v[i] * stddev + mean);
    img.pixels[i] = static_cast<std::uint8_t>(p < 0.0 ? 0.0 : (p > 255.0 ? 255.0 : p));
  }
  return img;
}

PeriodicSignal read_wav(const std::string& path, int* sample_rate) {
  std::ifstream in = open_in(path);
  check_magic(in, "RIFF", path);
  get<std::uint32_t>(in, path);  // RIFF payload size
  check_magic(in, "WAVE", path);

  bool have_fmt = false;
  std::uint32_t rate = 0;
  std::vector<std::int16_t> samples;
  bool have_data = false;
  while (!have_data || !have_fmt) {
    char id[4];
    in.read(id, 4);
    if (!in) throw IoError("missing fmt/data chunk: " + path);
    const auto size = get<std::uint32_t>(in, path);
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (size < 16) throw IoError("short fmt chunk: " + path);
      const auto format = get<std::uint16_t>(in, path);
      const auto channels = get<std::uint16_t>(in, path);
      rate = get<std::uint32_t>(in, path);
      get<std::uint32_t>(in, path);  // byte rate
      get<std::uint16_t>(in, path);  // block align
      const auto bits = get<std::uint16_t>(in, path);
      if (format != 1 || bits != 16) throw IoError("only 16-bit PCM supported: " + path);
      if (channels != 1) throw IoError("only mono audio supported: " + path);
      in.ignore(size - 16);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      samples.resize(size / 2);
      in.read(reinterpret_cast<char*>(samples.data()), static_cast<std::streamsize>(size / 2 * 2));
      if (!in) throw IoError("truncated data chunk: " + path);
      have_data = true;
    } else {
      in.ignore(size + (size & 1));
      if (!in) throw IoError("truncated chunk: " + path);
      continue;
    }
    if (size & 1) in.ignore(1);
  }
  if (samples.size() < 4) throw IoError("audio too short: " + path);

  PeriodicSignal x(GridShape::line(static_cast<std::int64_t>(samples.size())));
  for (std::size_t i = 0; i < samples.size(); ++i) x.v[i] = samples[i] / 32768.0;
  if (sample_rate) *sample_rate = static_cast<int>(rate);
  return x;
}

void write_wav(const std::string& path, const PeriodicSignal& x, int sample_rate) {
  if (x.shape.rank != 1) throw ConfigError("audio output requires a rank-1 signal");
  if (sample_rate <= 0) throw ConfigError("sample rate must be positive");
  const std::uint32_t n = static_cast<std::uint32_t>(x.v.size());
  const std::uint32_t data_bytes = n * 2;

  AtomicWriter w(path);
  std::ostream& os = w.stream();
  put_magic(os, "RIFF");
  put<std::uint32_t>(os, 36 + data_bytes);
  put_magic(os, "WAVE");
  put_magic(os, "fmt ");
  put<std::uint32_t>(os, 16);
  put<std::uint16_t>(os, 1);  // PCM
  put<std::uint16_t>(os, 1);  // mono
  put<std::uint32_t>(os, static_cast<std::uint32_t>(sample_rate));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(sample_rate) * 2);
  put<std::uint16_t>(os, 2);   // block align
  put<std::uint16_t>(os, 16);  // bits per sample
  put_magic(os, "data");
  put<std::uint32_t>(os, data_bytes);
  for (double v : x.v) {
    double s = std::round(v * 32768.0);
    if (s < -32768.0) s = -32768.0;
    if (s > 32767.0) s = 32767.0;
    put<std::int16_t>(os, static_cast<std::int16_t>(s));
  }
  w.commit();
}

void write_csv(const std::string& path, const std::vector<std::string>& labels,
               const std::vector<double>& values) {
  if (labels.size() != values.size()) throw ConfigError("label/value count mismatch");
  AtomicWriter w(path);
  char buf[64];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].find(',') != std::string::npos)
      throw ConfigError("labels must not contain commas: " + labels[i]);
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    w.stream() << labels[i] << ',' << buf << '\n';
  }
  w.commit();
}

void write_csv(const std::string& path, const EnergyVector& phi) {
  static const std::vector<std::string> empty;
  write_csv(path, phi.labels ? *phi.labels : empty, phi.values);
}

void read_csv(const std::string& path, std::vector<std::string>& labels,
              std::vector<double>& values) {
  std::ifstream in = open_in(path);
  labels.clear();
  values.clear();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw IoError(path + ":" + std::to_string(lineno) + ": expected label,value");
    const std::string num = line.substr(comma + 1);
    char* end = nullptr;
    const double v = std::strtod(num.c_str(), &end);
    if (end == num.c_str() || *end != '\0')
      throw IoError(path + ":" + std::to_string(lineno) + ": bad number: " + num);
    labels.push_back(line.substr(0, comma));
    values.push_back(v);
  }
}

void write_trace_csv(const std::string& path, const DescentTrace& trace) {
  AtomicWriter w(path);
  w.stream() << "iter,objective,phi_dist,grad_norm,kappa\n";
  char buf[160];
  for (std::size_t i = 0; i < trace.iters.size(); ++i) {
    const auto& r = trace.iters[i];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", i, r.objective, r.phi_dist,
                  r.grad_norm, r.kappa);
    w.stream() << buf;
  }
  w.commit();
}

void write_text_file(const std::string& path, const std::string& text) {
  AtomicWriter w(path);
  w.stream().write(text.data(), static_cast<std::streamsize>(text.size()));
  w.commit();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace mcgd
