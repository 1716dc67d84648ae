#include "bianchi/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "builtin_presentations.hpp"

namespace bianchi {

Word word_inverse(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (auto& x : r) x = -x;
  return r;
}

Word free_reduce(const Word& w) {
  Word r;
  r.reserve(w.size());
  for (int x : w) {
    if (!r.empty() && r.back() == -x)
      r.pop_back();
    else
      r.push_back(x);
  }
  return r;
}

Word cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  size_t i = 0, j = r.size();
  while (j - i >= 2 && r[i] == -r[j - 1]) {
    ++i;
    --j;
  }
  return Word(r.begin() + i, r.begin() + j);
}

Word cyclic_canonical(const Word& w) {
  Word base = cyclic_reduce(w);
  if (base.empty()) return base;
  Word best;
  for (const Word& v : {base, word_inverse(base)}) {
    for (size_t k = 0; k < v.size(); ++k) {
      Word rot(v.begin() + k, v.end());
      rot.insert(rot.end(), v.begin(), v.begin() + k);
      if (best.empty() || rot < best) best = std::move(rot);
    }
  }
  return best;
}

size_t GroupPresentation::total_relator_length() const {
  size_t n = 0;
  for (const auto& r : relators) n += r.size();
  return n;
}

Mat2 GroupPresentation::evaluate(const Word& w) const {
  Mat2 m = Mat2::identity();
  for (int x : w) {
    size_t g = static_cast<size_t>(std::abs(x)) - 1;
    if (g >= matrices.size()) throw std::out_of_range("evaluate: letter out of range");
    m = mat_mul(field, m, x > 0 ? matrices[g] : mat_inv_sl2(field, matrices[g]));
  }
  return m;
}

std::string GroupPresentation::format_word(const Word& w) const {
  std::ostringstream os;
  for (size_t i = 0; i < w.size(); ++i) {
    size_t g = static_cast<size_t>(std::abs(w[i])) - 1;
    os << (i ? " " : "") << names.at(g) << (w[i] < 0 ? "^-1" : "");
  }
  return os.str();
}

void GroupPresentation::validate() const {
  if (names.size() != matrices.size()) throw std::runtime_error("presentation: generator/matrix count mismatch");
  for (size_t g = 0; g < matrices.size(); ++g)
    if (mat_det(field, matrices[g]) != RingElement(1))
      throw std::runtime_error("presentation " + source + ": generator " + names[g] + " has determinant != 1");
  for (const auto& r : relators)
    if (evaluate(r) != Mat2::identity())
      throw std::runtime_error("presentation " + source + ": relator " + format_word(r) + " does not evaluate to 1");
}

namespace {

class WordParser {
 public:
  WordParser(const std::string& s, const std::vector<std::string>& names) : s_(s), names_(names) {}

  Word parse() {
    Word w = sequence();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return w;
  }

 private:
  const std::string& s_;
  const std::vector<std::string>& names_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("word parse error at offset " + std::to_string(pos_) + ": " + msg + " in '" + s_ + "'");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  Word sequence() {
    Word w;
    while (true) {
      skip();
      if (pos_ >= s_.size() || s_[pos_] == ')' || s_[pos_] == ']' || s_[pos_] == ',') break;
      Word f = factor();
      w.insert(w.end(), f.begin(), f.end());
    }
    return w;
  }

  Word power(const Word& base) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == '^') {
      ++pos_;
      skip();
      size_t start = pos_;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("missing exponent");
      long k = std::stol(s_.substr(start, pos_ - start));
      Word unit = k < 0 ? word_inverse(base) : base;
      Word r;
      for (long i = 0; i < std::labs(k); ++i) r.insert(r.end(), unit.begin(), unit.end());
      return r;
    }
    return base;
  }

  Word factor() {
    skip();
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Word inner = sequence();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return power(inner);
    }
    if (c == '[') {
      ++pos_;
      Word x = sequence();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ',') fail("expected ','");
      ++pos_;
      Word y = sequence();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ']') fail("expected ']'");
      ++pos_;
      Word w = word_inverse(x);
      Word yi = word_inverse(y);
      w.insert(w.end(), yi.begin(), yi.end());
      w.insert(w.end(), x.begin(), x.end());
      w.insert(w.end(), y.begin(), y.end());
      return power(w);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      auto it = std::find(names_.begin(), names_.end(), name);
      if (it == names_.end()) fail("unknown generator '" + name + "'");
      return power(Word{static_cast<int>(it - names_.begin()) + 1});
    }
    fail("unexpected character");
  }
};

std::string strip_comment(const std::string& line) {
  auto p = line.find('#');
  return p == std::string::npos ? line : line.substr(0, p);
}

}  // namespace

Word parse_word(const std::string& text, const std::vector<std::string>& names) {
  return WordParser(text, names).parse();
}

GroupPresentation parse_presentation(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header = false;
  std::optional<long> D;
  GroupPresentation p;
  p.source = source;
  std::vector<std::string> relator_text;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument(source + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(strip_comment(line));
    std::string key;
    if (!(ls >> key)) continue;
    if (!header) {
      int version = 0;
      if (key != "bianchi-presentation" || !(ls >> version)) fail("missing 'bianchi-presentation <version>' header");
      if (version != 1) fail("unsupported format version " + std::to_string(version));
      header = true;
      continue;
    }
    if (key == "field") {
      long d;
      if (!(ls >> d)) fail("bad field line");
      D = d;
      p.field = QuadField(d);
    } else if (key == "generator") {
      if (!D) fail("generator before field");
      std::string name;
      if (!(ls >> name)) fail("generator without name");
      Mat2 m;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          std::string a, b;
          if (!(ls >> a >> b)) fail("generator " + name + " needs 8 integers");
          m.e[i][j] = RingElement(Int(a), Int(b));
        }
      if (std::find(p.names.begin(), p.names.end(), name) != p.names.end()) fail("duplicate generator " + name);
      p.names.push_back(name);
      p.matrices.push_back(m);
    } else if (key == "relator") {
      std::string rest;
      std::getline(ls, rest);
      relator_text.push_back(rest);
    } else {
      fail("unknown directive '" + key + "'");
    }
  }
  if (!header) throw std::invalid_argument(source + ": empty presentation");
  if (!D) throw std::invalid_argument(source + ": missing field line");
  if (p.names.empty()) throw std::invalid_argument(source + ": no generators");
  for (const auto& t : relator_text) {
    Word w = free_reduce(parse_word(t, p.names));
    if (!w.empty()) p.relators.push_back(w);
  }
  p.validate();
  return p;
}

std::vector<long> builtin_presentation_fields() {
  std::vector<long> out;
  for (const auto& e : builtin_presentation_texts()) out.push_back(e.first);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::string> data_dir_from_env() {
  const char* d = std::getenv("BIANCHI_DATA_DIR");
  if (d && *d) return std::string(d);
  return std::nullopt;
}

GroupPresentation load_presentation(long D, const std::optional<std::string>& data_dir) {
  if (data_dir) {
    std::filesystem::path path = std::filesystem::path(*data_dir) / ("D" + std::to_string(D) + ".pres");
    if (std::filesystem::exists(path)) {
      std::ifstream f(path);
      std::stringstream ss;
      ss << f.rdbuf();
      GroupPresentation p = parse_presentation(ss.str(), path.string());
      if (p.field.D() != D) throw std::runtime_error(path.string() + ": field does not match file name");
      return p;
    }
  }
  for (const auto& [d, text] : builtin_presentation_texts())
    if (d == D) return parse_presentation(text, "builtin:D" + std::to_string(D));
  throw std::invalid_argument("no presentation available for D = " + std::to_string(D));
}

}  // namespace bianchi
