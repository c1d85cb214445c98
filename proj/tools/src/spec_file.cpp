#include "metallic_cli/spec_file.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "metallic/sampling.hpp"

namespace metallic::cli {

SpecError::SpecError(const std::string& file, std::size_t line, std::size_t column,
                     const std::string& msg)
    : ParseError(msg, column),
      line_(line),
      column_(column),
      msg_(msg),
      full_(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg) {}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool ManifoldSpec::all_periodic() const {
  if (periodic.empty()) return false;
  for (bool b : periodic)
    if (!b) return false;
  return true;
}

Structure ManifoldSpec::structure() const {
  return Structure(MetricField::parse(metric, dim), EndoField::parse(endomorphism, dim), {p, q});
}

std::vector<Point> ManifoldSpec::sample_points(int count, std::uint64_t s) const {
  if (!points.empty()) return points;
  return halton_points(lo, hi, count, s);
}

namespace {

struct Item {
  std::string text;
  std::size_t column = 0;  // 1-based, first character of the content
  bool quoted = false;
};

class Parser {
 public:
  Parser(const std::string& source) : source_(source) {}

  ManifoldSpec run(const std::string& text);

 private:
  std::string source_;
  std::size_t line_ = 0;
  ManifoldSpec spec_;
  std::string section_;
  std::map<std::string, bool> seen_keys_;
  bool have_dim_ = false;
  bool lo_set_ = false, hi_set_ = false, p_set_ = false, q_set_ = false;
  FormEntry* form_ = nullptr;
  bool form_degree_set_ = false;

  [[noreturn]] void fail(std::size_t col, const std::string& msg) const {
    throw SpecError(source_, line_, col, msg);
  }

  std::vector<Item> split(const std::string& s, std::size_t offset);
  Expr expr(const Item& it, int dim);
  double constant(const Item& it);
  int integer(const Item& it);
  bool boolean(const Item& it);
  void key_value(const std::string& key, std::size_t key_col, const std::vector<Item>& vals);
  void row(const std::vector<Item>& items, std::size_t col);
  void require_dim(std::size_t col) const {
    if (!have_dim_) fail(col, "dim must be set in [manifold] before this section");
  }
  void finish();
};

std::string trim(const std::string& s, std::size_t& lead) {
  std::size_t a = 0;
  while (a < s.size() && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  std::size_t b = s.size();
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  lead = a;
  return s.substr(a, b - a);
}

std::vector<Item> Parser::split(const std::string& s, std::size_t offset) {
  std::vector<Item> out;
  std::size_t i = 0;
  while (true) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    Item it;
    if (i < s.size() && s[i] == '"') {
      const std::size_t close = s.find('"', i + 1);
      if (close == std::string::npos) fail(offset + i + 1, "unterminated string");
      it.text = s.substr(i + 1, close - i - 1);
      it.column = offset + i + 2;
      it.quoted = true;
      i = close + 1;
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && s[i] != ',') fail(offset + i + 1, "expected ',' after string");
    } else {
      const std::size_t comma = s.find(',', i);
      const std::size_t end = comma == std::string::npos ? s.size() : comma;
      std::size_t lead = 0;
      it.text = trim(s.substr(i, end - i), lead);
      it.column = offset + i + lead + 1;
      if (it.text.empty()) fail(offset + i + 1, "empty item");
      if (it.text.find('"') != std::string::npos) fail(it.column, "stray quote");
      i = end;
    }
    out.push_back(it);
    if (i >= s.size()) break;
    ++i;  // comma
    if (i >= s.size()) fail(offset + i, "trailing ','");
  }
  return out;
}

Expr Parser::expr(const Item& it, int dim) {
  try {
    return parse(it.text, dim);
  } catch (const ParseError& e) {
    std::string msg = e.what();
    const auto at = msg.rfind(" at position ");
    if (at != std::string::npos) msg.resize(at);
    fail(it.column + e.position(), msg);
  }
}

double Parser::constant(const Item& it) {
  const Expr e = expr(it, 0);
  try {
    return eval(e, Point{});
  } catch (const DomainError& err) {
    fail(it.column, err.what());
  }
}

int Parser::integer(const Item& it) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(it.text, &used);
  } catch (const std::exception&) {
    fail(it.column, "expected an integer");
  }
  if (used != it.text.size()) fail(it.column + used, "expected an integer");
  return v;
}

bool Parser::boolean(const Item& it) {
  if (it.text == "true") return true;
  if (it.text == "false") return false;
  fail(it.column, "expected true or false");
}

void Parser::key_value(const std::string& key, std::size_t key_col,
                       const std::vector<Item>& vals) {
  const std::string full = section_ + "." + key;
  if (section_ != "form" && seen_keys_[full]) fail(key_col, "duplicate key '" + key + "'");
  seen_keys_[full] = true;
  auto one = [&]() -> const Item& {
    if (vals.size() != 1) fail(vals.size() > 1 ? vals[1].column : key_col, "expected one value");
    return vals[0];
  };
  auto vector = [&] {
    require_dim(key_col);
    if (static_cast<int>(vals.size()) != spec_.dim)
      fail(key_col, "expected " + std::to_string(spec_.dim) + " values");
    Point out;
    for (const Item& v : vals) out.push_back(constant(v));
    return out;
  };

  if (section_ == "manifold") {
    if (key == "name") {
      spec_.name = one().text;
    } else if (key == "dim") {
      const int n = integer(one());
      if (n < 1 || n > 8) fail(one().column, "dim must be between 1 and 8");
      spec_.dim = n;
      have_dim_ = true;
    } else if (key == "coords") {
      require_dim(key_col);
      if (static_cast<int>(vals.size()) != spec_.dim)
        fail(key_col, "expected " + std::to_string(spec_.dim) + " coordinate names");
      for (int i = 0; i < spec_.dim; ++i)
        if (vals[static_cast<std::size_t>(i)].text != "x" + std::to_string(i + 1))
          fail(vals[static_cast<std::size_t>(i)].column,
               "coordinates must be named x1..x" + std::to_string(spec_.dim));
    } else if (key == "periodic") {
      require_dim(key_col);
      if (static_cast<int>(vals.size()) != spec_.dim)
        fail(key_col, "expected " + std::to_string(spec_.dim) + " flags");
      spec_.periodic.clear();
      for (const Item& v : vals) spec_.periodic.push_back(boolean(v));
    } else if (key == "p") {
      spec_.p = constant(one());
      p_set_ = true;
    } else if (key == "q") {
      spec_.q = constant(one());
      q_set_ = true;
    } else if (key == "lo") {
      spec_.lo = vector();
      lo_set_ = true;
    } else if (key == "hi") {
      spec_.hi = vector();
      hi_set_ = true;
    } else if (key == "samples") {
      spec_.samples = integer(one());
      if (spec_.samples < 1) fail(one().column, "samples must be positive");
    } else if (key == "seed") {
      const int s = integer(one());
      if (s < 0) fail(one().column, "seed must be non-negative");
      spec_.seed = static_cast<std::uint64_t>(s);
    } else {
      fail(key_col, "unknown key '" + key + "' in [manifold]");
    }
  } else if (section_ == "form") {
    if (key != "degree") fail(key_col, "unknown key '" + key + "' in [form]");
    if (form_degree_set_) fail(key_col, "duplicate key 'degree'");
    const int r = integer(one());
    if (r < 0 || r > spec_.dim) fail(one().column, "degree out of range");
    form_->degree = r;
    form_->form = ComplexForm(FormField(spec_.dim, r), FormField(spec_.dim, r));
    form_degree_set_ = true;
  } else {
    fail(key_col, "key/value entries are not allowed in [" + section_ + "]");
  }
}

void Parser::row(const std::vector<Item>& items, std::size_t col) {
  const int n = spec_.dim;
  if (section_ == "metric" || section_ == "endomorphism") {
    require_dim(col);
    auto& rows = section_ == "metric" ? spec_.metric : spec_.endomorphism;
    if (static_cast<int>(rows.size()) == n) fail(col, "too many rows in [" + section_ + "]");
    if (static_cast<int>(items.size()) != n)
      fail(col, "expected " + std::to_string(n) + " entries in the row");
    std::vector<std::string> r;
    for (const Item& it : items) {
      if (!it.quoted) fail(it.column, "matrix entries must be quoted");
      expr(it, n);
      r.push_back(it.text);
    }
    rows.push_back(r);
  } else if (section_ == "points") {
    require_dim(col);
    if (static_cast<int>(items.size()) != n)
      fail(col, "expected " + std::to_string(n) + " coordinates");
    Point pt;
    for (const Item& it : items) pt.push_back(constant(it));
    spec_.points.push_back(pt);
  } else if (section_ == "map") {
    require_dim(col);
    for (const Item& it : items) {
      if (!it.quoted) fail(it.column, "map components must be quoted");
      expr(it, n);
      spec_.map.push_back(it.text);
    }
  } else if (section_ == "form") {
    if (!form_degree_set_) fail(col, "degree must be set before the terms of a [form]");
    if (items.size() < 2 || items.size() > 3)
      fail(col, "expected \"indices\", \"real part\"[, \"imaginary part\"]");
    std::vector<int> idx;
    std::istringstream in(items[0].text);
    std::string tok;
    while (in >> tok) {
      Item t{tok, items[0].column, false};
      const int i = integer(t);
      if (i < 1 || i > n) fail(items[0].column, "index out of range");
      idx.push_back(i - 1);
    }
    if (static_cast<int>(idx.size()) != form_->degree)
      fail(items[0].column, "term has " + std::to_string(idx.size()) + " indices, degree is " +
                                std::to_string(form_->degree));
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b)
        if (idx[a] == idx[b]) fail(items[0].column, "repeated index");
    for (std::size_t k = 1; k < items.size(); ++k)
      if (!items[k].quoted) fail(items[k].column, "coefficients must be quoted");
    const FormField re = FormField::monomial(n, expr(items[1], n), idx);
    form_->form.re = form_->form.re + re;
    if (items.size() == 3)
      form_->form.im = form_->form.im + FormField::monomial(n, expr(items[2], n), idx);
  } else if (section_ == "manifold") {
    fail(col, "expected key = value");
  } else {
    fail(col, "entry outside of any section");
  }
}

void Parser::finish() {
  if (!have_dim_) throw SpecError(source_, line_, 1, "missing [manifold] dim");
  if (form_ && !form_degree_set_) throw SpecError(source_, line_, 1, "[form] without degree");
  const int n = spec_.dim;
  auto incomplete = [&](const std::vector<std::vector<std::string>>& rows, const char* name) {
    if (!rows.empty() && static_cast<int>(rows.size()) != n)
      throw SpecError(source_, line_, 1,
                      std::string("[") + name + "] needs " + std::to_string(n) + " rows");
  };
  incomplete(spec_.metric, "metric");
  incomplete(spec_.endomorphism, "endomorphism");
  if (spec_.metric.empty() != spec_.endomorphism.empty())
    throw SpecError(source_, line_, 1, "[metric] and [endomorphism] must appear together");
  if (spec_.has_structure() && (!p_set_ || !q_set_))
    throw SpecError(source_, line_, 1, "p and q are required with a structure");
  if (!lo_set_) spec_.lo.assign(static_cast<std::size_t>(n), -1.0);
  if (!hi_set_) spec_.hi.assign(static_cast<std::size_t>(n), 1.0);
  for (int i = 0; i < n; ++i)
    if (!(spec_.lo[static_cast<std::size_t>(i)] < spec_.hi[static_cast<std::size_t>(i)]))
      throw SpecError(source_, line_, 1, "lo must be below hi in every coordinate");
  if (spec_.periodic.empty()) spec_.periodic.assign(static_cast<std::size_t>(n), false);
  if (spec_.name.empty()) spec_.name = source_;
}

ManifoldSpec Parser::run(const std::string& text) {
  spec_.source = source_;
  spec_.digest = fnv1a_hex(text);
  std::istringstream in(text);
  std::string raw;
  static const char* kSections[] = {"manifold", "metric", "endomorphism", "points", "map", "form"};
  std::map<std::string, bool> seen_sections;
  while (std::getline(in, raw)) {
    ++line_;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::size_t lead = 0;
    const std::string s = trim(raw, lead);
    if (s.empty() || s[0] == '#') continue;
    if (s[0] == '[') {
      if (s.back() != ']') fail(lead + s.size(), "expected ']'");
      const std::string name = s.substr(1, s.size() - 2);
      bool known = false;
      for (const char* k : kSections) known = known || name == k;
      if (!known) fail(lead + 2, "unknown section [" + name + "]");
      if (name != "form" && seen_sections[name]) fail(lead + 1, "duplicate section [" + name + "]");
      if (name != "manifold") require_dim(lead + 1);
      seen_sections[name] = true;
      if (section_ == "form" && !form_degree_set_) fail(lead + 1, "[form] without degree");
      section_ = name;
      if (name == "form") {
        spec_.forms.emplace_back();
        form_ = &spec_.forms.back();
        form_degree_set_ = false;
      }
      continue;
    }
    if (section_.empty()) fail(lead + 1, "entry outside of any section");
    const std::size_t eq = s.find('=');
    const std::size_t quote = s.find('"');
    if (eq != std::string::npos && (quote == std::string::npos || eq < quote)) {
      std::size_t klead = 0;
      const std::string key = trim(s.substr(0, eq), klead);
      if (key.empty()) fail(lead + 1, "missing key");
      for (char c : key)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
          fail(lead + klead + 1, "malformed key");
      if (eq + 1 >= s.size()) fail(lead + eq + 2, "missing value");
      key_value(key, lead + klead + 1, split(s.substr(eq + 1), lead + eq + 1));
    } else {
      row(split(s, lead), lead + 1);
    }
  }
  finish();
  return spec_;
}

}  // namespace

ManifoldSpec parse_spec(const std::string& text, const std::string& source) {
  Parser p(source);
  return p.run(text);
}

ManifoldSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError(path, 0, 0, "cannot read the file");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string name = path;
  const auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  return parse_spec(buf.str(), name);
}

}  // namespace metallic::cli
