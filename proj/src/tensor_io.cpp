#include "robustgame/tensor_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>

#include "robustgame/errors.hpp"

namespace robustgame {

namespace {

std::vector<std::string> split_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) tokens.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

double parse_double(const std::string& token) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != token.size()) throw ParseError("not a number: '" + token + "'");
  return v;
}

std::size_t parse_size(const std::string& token) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || v == 0) {
    throw ParseError("bad shape entry '" + token + "'");
  }
  return v;
}

// Next header token of a netpbm file, skipping whitespace and # comments.
std::string netpbm_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  if (tok.empty()) throw ParseError("truncated netpbm header");
  return tok;
}

}  // namespace

Tensor read_tensor_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError("empty tensor file");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  constexpr std::string_view kPrefix = "shape:";
  if (header.rfind(kPrefix, 0) != 0) throw ParseError("tensor CSV must start with 'shape:'");
  std::vector<std::size_t> shape;
  for (const std::string& tok : split_tokens(header.substr(kPrefix.size()))) shape.push_back(parse_size(tok));
  if (shape.empty()) throw ParseError("tensor CSV header has no dimensions");

  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<double> values;
  for (const std::string& tok : split_tokens(body)) values.push_back(parse_double(tok));
  if (values.size() != shape_size(shape)) {
    throw ParseError("tensor CSV has " + std::to_string(values.size()) + " values, shape needs " +
                     std::to_string(shape_size(shape)));
  }
  Tensor t(std::move(shape), std::move(values));
  if (!t.in_unit_box()) throw InputError("tensor values must lie in [0,1]");
  return t;
}

void write_tensor_csv(std::ostream& out, const Tensor& t) {
  out << "shape:";
  for (std::size_t i = 0; i < t.shape().size(); ++i) out << (i ? "," : "") << t.shape()[i];
  out << "\n";
  char buf[32];
  for (double v : t.data()) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf << "\n";
  }
}

Tensor read_netpbm(std::istream& in) {
  const std::string magic = netpbm_token(in);
  const bool gray = magic == "P2" || magic == "P5";
  const bool binary = magic == "P5" || magic == "P6";
  if (!gray && magic != "P3" && magic != "P6") throw ParseError("unsupported netpbm magic '" + magic + "'");
  const std::size_t w = parse_size(netpbm_token(in));
  const std::size_t h = parse_size(netpbm_token(in));
  const std::size_t maxval = parse_size(netpbm_token(in));
  if (maxval > 255) throw ParseError("only 8-bit netpbm images are supported");
  const std::size_t c = gray ? 1 : 3;
  std::vector<double> values(h * w * c);
  for (double& v : values) {
    std::size_t sample = 0;
    if (binary) {
      const int ch = in.get();
      if (ch == EOF) throw ParseError("truncated netpbm pixel data");
      sample = static_cast<std::size_t>(ch);
    } else {
      sample = std::stoul(netpbm_token(in));
    }
    if (sample > maxval) throw InputError("netpbm sample exceeds maxval");
    v = static_cast<double>(sample) / static_cast<double>(maxval);
  }
  return Tensor({h, w, c}, std::move(values));
}

bool netpbm_compatible(const Tensor& t) {
  const auto& s = t.shape();
  return s.size() == 2 || (s.size() == 3 && (s[2] == 1 || s[2] == 3));
}

void write_netpbm(std::ostream& out, const Tensor& t) {
  if (!netpbm_compatible(t)) throw InputError("tensor shape cannot be written as PGM/PPM");
  const auto& s = t.shape();
  const std::size_t c = s.size() == 2 ? 1 : s[2];
  out << (c == 1 ? "P5" : "P6") << "\n" << s[1] << " " << s[0] << "\n255\n";
  for (double v : t.data()) {
    const long q = std::lround(std::clamp(v, 0.0, 1.0) * 255.0);
    out.put(static_cast<char>(static_cast<unsigned char>(q)));
  }
}

Tensor load_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file " + path.string());
  const int first = in.peek();
  if (first == 'P') return read_netpbm(in);
  return read_tensor_csv(in);
}

std::vector<std::filesystem::path> save_witness(const Tensor& t, const std::filesystem::path& stem) {
  std::vector<std::filesystem::path> written;
  std::filesystem::path csv = stem;
  csv += ".csv";
  {
    std::ofstream out(csv);
    if (!out) throw InputError("cannot write " + csv.string());
    write_tensor_csv(out, t);
  }
  written.push_back(csv);
  if (netpbm_compatible(t)) {
    const auto& s = t.shape();
    std::filesystem::path img = stem;
    img += (s.size() == 3 && s[2] == 3) ? ".ppm" : ".pgm";
    std::ofstream out(img, std::ios::binary);
    if (!out) throw InputError("cannot write " + img.string());
    write_netpbm(out, t);
    written.push_back(img);
  }
  return written;
}

}  // namespace robustgame
