#include "run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tvcli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

template <class T>
T parse_integer(const std::string& text) {
  const std::string t = trim(text);
  T v{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw std::invalid_argument("not an integer: '" + text + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::invalid_argument("cannot format number");
  return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  return v;
}

Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return {parse_double(text), 0.0};
  return {parse_double(text.substr(0, comma)), parse_double(text.substr(comma + 1))};
}

std::string format_complex(Complex z) {
  return format_double(z.real()) + "," + format_double(z.imag());
}

std::vector<long> parse_long_list(const std::string& text) {
  std::string t = text;
  for (char& c : t) {
    if (c == ',') c = ' ';
  }
  std::vector<long> out;
  for (const auto& tok : split_ws(t)) out.push_back(parse_integer<long>(tok));
  return out;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "nu") {
    nu = parse_long_list(value);
  } else if (key == "chi_sign") {
    chi_sign = parse_integer<int>(value);
  } else if (key == "chi_power") {
    chi_power = parse_complex(trim(value));
  } else if (key == "s") {
    s.clear();
    for (const auto& tok : split_ws(value)) s.push_back(parse_complex(tok));
  } else if (key == "seed") {
    seed = parse_integer<std::uint64_t>(value);
  } else if (key == "samples") {
    samples = parse_integer<std::size_t>(value);
  } else if (key == "trials") {
    trials = parse_integer<std::size_t>(value);
  } else if (key == "quad_nodes") {
    quad_nodes = parse_integer<int>(value);
  } else if (key == "quad_t_lo") {
    quad_t_lo = parse_double(value);
  } else if (key == "quad_t_hi") {
    quad_t_hi = parse_double(value);
  } else if (key == "quad_tolerance") {
    quad_tolerance = parse_double(value);
  } else if (key == "output") {
    output = trim(value);
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

std::string RunConfig::to_text() const {
  std::ostringstream out;
  out << "nu =";
  for (long v : nu) out << ' ' << v;
  out << "\nchi_sign = " << chi_sign << "\n";
  out << "chi_power = " << format_complex(chi_power) << "\n";
  out << "s =";
  for (const auto& z : s) out << ' ' << format_complex(z);
  out << "\nseed = " << seed << "\n";
  out << "samples = " << samples << "\n";
  out << "trials = " << trials << "\n";
  out << "quad_nodes = " << quad_nodes << "\n";
  out << "quad_t_lo = " << format_double(quad_t_lo) << "\n";
  out << "quad_t_hi = " << format_double(quad_t_hi) << "\n";
  out << "quad_tolerance = " << format_double(quad_tolerance) << "\n";
  out << "output =" << (output.empty() ? "" : " " + output) << "\n";
  return out.str();
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    try {
      cfg.set(trim(t.substr(0, eq)), t.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace tvcli
