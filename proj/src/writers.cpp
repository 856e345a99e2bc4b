#include "qwalk/writers.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qwalk/errors.hpp"

namespace qwalk::io {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 40> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 17);
  (void)ec;
  return std::string(buf.data(), end);
}

ObservableCsvWriter::ObservableCsvWriter(std::ostream& out) : out_(out) {
  out_ << "t,norm,sx_expect,overlap_plus,overlap_minus,com,peak_site\n";
}

void ObservableCsvWriter::write(const ObservableRecord& rec) {
  out_ << rec.t << ',' << format_double(rec.norm) << ',' << format_double(rec.sx_expect) << ','
       << format_double(rec.overlap_plus) << ',' << format_double(rec.overlap_minus) << ','
       << format_double(rec.center_of_mass) << ',' << rec.peak_site << '\n';
}

namespace {

void write_array(std::ostream& out, const std::vector<double>& values) {
  out << '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ',';
    // JSON has no NaN literal; non-finite values become null.
    if (std::isfinite(values[i])) {
      out << format_double(values[i]);
    } else {
      out << "null";
    }
  }
  out << ']';
}

}  // namespace

void SnapshotNdjsonWriter::write(const ObservableRecord& rec) {
  if (!rec.density && !rec.m_z) return;
  out_ << "{\"t\":" << rec.t;
  if (rec.density) {
    out_ << ",\"density\":";
    write_array(out_, *rec.density);
  }
  if (rec.m_z) {
    out_ << ",\"m_z\":";
    write_array(out_, *rec.m_z);
  }
  out_ << "}\n";
}

void write_state_csv(std::ostream& out, const SpinorField& state) {
  out << "x,u_re,u_im,v_re,v_im\n";
  for (std::size_t i = 0; i < state.size(); ++i) {
    const cplx u = state.u(i);
    const cplx v = state.v(i);
    out << state.position(i) << ',' << format_double(u.real()) << ',' << format_double(u.imag())
        << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
  }
}

void write_state_csv(const std::filesystem::path& path, const SpinorField& state) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  write_state_csv(out, state);
}

namespace {

double parse_field(std::string_view text, std::size_t line) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ValidationError("state csv line " + std::to_string(line) + ": bad number '" +
                          std::string(text) + "'");
  }
  return value;
}

}  // namespace

SpinorField read_state_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("state csv is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,u_re,u_im,v_re,v_im") {
    throw ValidationError("state csv header must be x,u_re,u_im,v_re,v_im");
  }
  std::vector<long> xs;
  std::vector<cplx> u, v;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<std::string_view, 5> cols{};
    std::size_t start = 0;
    std::size_t n = 0;
    const std::string_view sv(line);
    while (n < 5) {
      const auto comma = sv.find(',', start);
      cols[n++] = sv.substr(start, comma == std::string_view::npos ? sv.npos : comma - start);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
      if (n == 5) throw ValidationError("state csv line " + std::to_string(lineno) + ": too many columns");
    }
    if (n != 5) throw ValidationError("state csv line " + std::to_string(lineno) + ": expected 5 columns");
    xs.push_back(static_cast<long>(parse_field(cols[0], lineno)));
    u.emplace_back(parse_field(cols[1], lineno), parse_field(cols[2], lineno));
    v.emplace_back(parse_field(cols[3], lineno), parse_field(cols[4], lineno));
  }
  if (u.size() < 2 || u.size() % 2 != 0) {
    throw ValidationError("state csv must hold an even number (>= 2) of sites, got " +
                          std::to_string(u.size()));
  }
  const long half = static_cast<long>(u.size() / 2);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] != static_cast<long>(i) - half) {
      throw ValidationError("state csv rows must list x = -L/2 .. L/2-1 in order (row " +
                            std::to_string(i + 2) + ")");
    }
  }
  return SpinorField(u, v);
}

SpinorField read_state_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return read_state_csv(in);
}

}  // namespace qwalk::io
