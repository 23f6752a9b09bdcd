#include "hamgame/gamefile.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "hamgame/compiler.hpp"

namespace hamgame::io {
namespace {

using Pointer = Json::json_pointer;

// Maps JSON pointers to the 1-based line on which their value starts. The
// document has already been accepted by the JSON parser, so this scanner only
// tracks structure.
class LineIndex {
 public:
  explicit LineIndex(std::string_view text) : text_(text) {
    skip_ws();
    if (pos_ < text_.size()) value("");
  }

  std::size_t line_of(const Pointer& ptr) const {
    // Fall back to the nearest ancestor that was recorded.
    Pointer p = ptr;
    while (true) {
      const auto it = lines_.find(p.to_string());
      if (it != lines_.end()) return it->second;
      if (p.empty()) return 1;
      p = p.parent_pointer();
    }
  }

 private:
  void value(const std::string& path) {
    lines_.emplace(path, line_);
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      skip_ws();
      if (peek() == '}') {
        ++pos_;
        return;
      }
      while (pos_ < text_.size()) {
        skip_ws();
        const std::string key = string_token();
        skip_ws();
        ++pos_;  // ':'
        skip_ws();
        value(path + "/" + escape(key));
        skip_ws();
        if (text_[pos_++] == '}') return;
      }
    } else if (c == '[') {
      ++pos_;
      skip_ws();
      if (peek() == ']') {
        ++pos_;
        return;
      }
      for (std::size_t k = 0; pos_ < text_.size(); ++k) {
        skip_ws();
        value(path + "/" + std::to_string(k));
        skip_ws();
        if (text_[pos_++] == ']') return;
      }
    } else if (c == '"') {
      string_token();
    } else {
      while (pos_ < text_.size() && std::string_view(",]} \t\r\n").find(text_[pos_]) == std::string_view::npos)
        ++pos_;
    }
  }

  std::string string_token() {
    std::string out;
    ++pos_;  // opening quote
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') {
        out += text_[pos_++];
      }
      out += text_[pos_++];
    }
    ++pos_;
    // Keys with escapes are decoded through the JSON parser.
    if (out.find('\\') != std::string::npos) return Json::parse("\"" + out + "\"").get<std::string>();
    return out;
  }

  static std::string escape(const std::string& key) {
    std::string out;
    for (char ch : key) {
      if (ch == '~') out += "~0";
      else if (ch == '/') out += "~1";
      else out += ch;
    }
    return out;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::map<std::string, std::size_t> lines_;
};

class Reader {
 public:
  Reader(std::string_view text, std::string_view source) : source_(source), index_(parse(text)) {}

  const Json& root() const { return root_; }

  [[noreturn]] void fail(const Pointer& at, const std::string& message) const {
    const std::size_t line = index_.line_of(at);
    throw ParseError(where(line) + message, line);
  }

  [[noreturn]] void fail_numeric(const Pointer& at, const std::string& message) const {
    throw NumericalError(where(index_.line_of(at)) + message);
  }

  const Json& at(const Pointer& ptr) const {
    if (!root_.contains(ptr)) fail(ptr.parent_pointer(), "missing field '" + ptr.back() + "'");
    return root_.at(ptr);
  }

  const Json& array(const Pointer& ptr) const {
    const Json& v = at(ptr);
    if (!v.is_array()) fail(ptr, "'" + ptr.to_string() + "' must be an array");
    return v;
  }

  std::size_t count(const Pointer& ptr) const {
    const Json& v = at(ptr);
    if (!v.is_number_integer() && !v.is_number_unsigned()) fail(ptr, "expected an integer");
    const auto n = v.get<long long>();
    if (n <= 0) fail(ptr, "expected a positive integer");
    return static_cast<std::size_t>(n);
  }

  std::string text(const Pointer& ptr) const {
    const Json& v = at(ptr);
    if (!v.is_string()) fail(ptr, "expected a string");
    return v.get<std::string>();
  }

  double number(const Pointer& ptr) const {
    const Json& v = at(ptr);
    if (!v.is_number()) fail(ptr, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail_numeric(ptr, "non-finite number");
    return x;
  }

  Complex scalar(const Pointer& ptr) const {
    const Json& v = at(ptr);
    if (v.is_number()) return number(ptr);
    if (!v.is_array() || v.size() != 2) fail(ptr, "complex entry must be a number or an [re, im] pair");
    return {number(ptr / 0), number(ptr / 1)};
  }

  CMatrix matrix(const Pointer& ptr) const {
    const Json& rows = array(ptr);
    const std::size_t n = rows.size();
    if (n == 0) fail(ptr, "matrix is empty");
    CMatrix m(n);
    for (std::size_t r = 0; r < n; ++r) {
      const Json& row = array(ptr / r);
      if (row.size() != n)
        fail(ptr / r, "matrix must be square: row " + std::to_string(r + 1) + " has " +
                          std::to_string(row.size()) + " entries, expected " + std::to_string(n));
      for (std::size_t c = 0; c < n; ++c) m(r, c) = scalar(ptr / r / c);
    }
    return m;
  }

  CMatrix hermitian(const Pointer& ptr) const {
    CMatrix m = matrix(ptr);
    if (!is_hermitian(m, kHermitianTol * std::max(1.0, frobenius_norm(m))))
      fail_numeric(ptr, "matrix is not Hermitian");
    return m;
  }

  DensityMatrix density(const Pointer& ptr) const {
    const Json& v = at(ptr);
    try {
      if (v.is_object() && v.contains("diagonal")) {
        std::vector<double> p;
        for (std::size_t k = 0; k < array(ptr / "diagonal").size(); ++k) p.push_back(number(ptr / "diagonal" / k));
        return DensityMatrix::diagonal(p);
      }
      return DensityMatrix(hermitian(ptr), 1e-9);
    } catch (const ParseError&) {
      throw;
    } catch (const NumericalError& e) {
      if (std::string_view(e.what()).starts_with(source_)) throw;
      fail_numeric(ptr, e.what());
    }
  }

  template <class Fn>
  auto anchored(const Pointer& ptr, Fn&& fn) const {
    try {
      return fn();
    } catch (const ParseError&) {
      throw;
    } catch (const NumericalError& e) {
      fail_numeric(ptr, e.what());
    } catch (const Error& e) {
      fail(ptr, e.what());
    }
  }

 private:
  std::string where(std::size_t line) const { return std::string(source_) + ":" + std::to_string(line) + ": "; }

  LineIndex parse(std::string_view text) {
    try {
      root_ = Json::parse(text);
    } catch (const Json::parse_error& e) {
      // The parser reports "... at line L, column C: ..."; keep its wording.
      std::size_t line = 1;
      const std::string msg = e.what();
      if (const auto p = msg.find("line "); p != std::string::npos) line = std::stoul(msg.substr(p + 5));
      throw ParseError(where(line) + msg, line);
    }
    if (!root_.is_object()) throw ParseError(where(1) + "document must be a JSON object", 1);
    return LineIndex(text);
  }

  std::string source_;
  Json root_;
  LineIndex index_;
};

const Pointer kRoot{};

StrategyBasis read_basis(const Reader& in, const Pointer& ptr) {
  const Json& entries = in.array(ptr);
  if (entries.empty()) in.fail(ptr, "strategy basis is empty");
  StrategyBasis basis;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const Pointer e = ptr / k;
    if (entries[k].is_string()) {
      const std::string name = entries[k].get<std::string>();
      if (!is_named_operator(name)) in.fail(e, "unknown operator name '" + name + "'");
      basis.labels.push_back(name);
      basis.operators.push_back(named_operator(name));
    } else if (entries[k].is_object()) {
      basis.labels.push_back(in.text(e / "label"));
      basis.operators.push_back(in.matrix(e / "matrix"));
    } else {
      in.fail(e, "basis entry must be an operator name or {\"label\", \"matrix\"}");
    }
  }
  in.anchored(ptr, [&] {
    basis.validate();
    return 0;
  });
  return basis;
}

ManipulativeGame read_manipulative(const Reader& in) {
  ManipulativeGame g;
  if (in.root().contains("name")) g.name = in.text(kRoot / "name");
  if (in.root().contains("classical")) {
    const Json& flag = in.root().at("classical");
    if (!flag.is_boolean()) in.fail(kRoot / "classical", "classical must be true or false");
    g.classical = flag.get<bool>();
  }
  const std::size_t players = in.count(kRoot / "players");
  const std::size_t object_dim = in.count(kRoot / "object_dim");

  g.initial_state = in.density(kRoot / "initial_state").matrix();
  if (g.initial_state.dim() != object_dim)
    in.fail(kRoot / "initial_state", "initial_state is " + std::to_string(g.initial_state.dim()) +
                                         "-dimensional but object_dim is " + std::to_string(object_dim));

  const Json& bases = in.array(kRoot / "strategy_basis");
  if (bases.size() != players) in.fail(kRoot / "strategy_basis", "need one strategy basis per player");
  for (std::size_t p = 0; p < players; ++p) {
    g.bases.push_back(read_basis(in, kRoot / "strategy_basis" / p));
    if (g.bases.back().object_dim() != object_dim)
      in.fail(kRoot / "strategy_basis" / p, "strategy operators do not act on the object space");
  }

  const Json& order = in.array(kRoot / "order");
  if (order.size() != players) in.fail(kRoot / "order", "order must list every player once");
  std::vector<bool> seen(players, false);
  for (std::size_t k = 0; k < players; ++k) {
    const std::size_t p = in.count(kRoot / "order" / k);
    if (p > players || seen[p - 1]) in.fail(kRoot / "order" / k, "order must be a permutation of 1..players");
    seen[p - 1] = true;
    g.order.push_back(p - 1);
  }

  const Json& payoffs = in.array(kRoot / "payoffs");
  if (payoffs.size() != players) in.fail(kRoot / "payoffs", "need one payoff observable per player");
  for (std::size_t p = 0; p < players; ++p) {
    g.observables.push_back(in.hermitian(kRoot / "payoffs" / p));
    if (g.observables.back().dim() != object_dim)
      in.fail(kRoot / "payoffs" / p, "observable dimension differs from object_dim");
  }
  in.anchored(kRoot, [&] {
    g.validate();
    return 0;
  });
  return g;
}

void read_table(const Reader& in, const Pointer& ptr, std::span<const std::size_t> shape,
                std::vector<double>& out) {
  if (shape.empty()) {
    out.push_back(in.number(ptr));
    return;
  }
  const Json& v = in.array(ptr);
  if (v.size() != shape.front())
    in.fail(ptr, "table has " + std::to_string(v.size()) + " entries at this level, expected " +
                     std::to_string(shape.front()));
  for (std::size_t k = 0; k < v.size(); ++k) read_table(in, ptr / k, shape.subspan(1), out);
}

AbstractGame read_abstract(const Reader& in) {
  static constexpr std::string_view kManipulative[] = {"players", "object_dim", "initial_state",
                                                       "strategy_basis", "order", "payoffs"};
  for (auto key : kManipulative)
    if (in.root().contains(std::string(key)))
      in.fail(kRoot / std::string(key), "field '" + std::string(key) + "' is not allowed next to an abstract block");

  const Pointer block = kRoot / "abstract";
  AbstractGame g;
  if (in.root().contains("name")) g.name = in.text(kRoot / "name");
  const Json& dims = in.array(block / "dims");
  if (dims.empty()) in.fail(block / "dims", "dims is empty");
  for (std::size_t p = 0; p < dims.size(); ++p) g.dims.push_back(in.count(block / "dims" / p));
  const std::size_t joint = g.joint_dim();

  const bool has_payoffs = in.root().at(block).contains("payoffs");
  const bool has_tables = in.root().at(block).contains("tables");
  if (has_payoffs == has_tables) in.fail(block, "abstract block needs exactly one of 'payoffs' or 'tables'");
  if (has_payoffs) {
    const Json& ops = in.array(block / "payoffs");
    if (ops.size() != g.players()) in.fail(block / "payoffs", "need one payoff operator per player");
    for (std::size_t p = 0; p < ops.size(); ++p) {
      CMatrix h = in.hermitian(block / "payoffs" / p);
      if (h.dim() != joint)
        in.fail(block / "payoffs" / p, "payoff operator is " + std::to_string(h.dim()) +
                                           "-dimensional, joint space is " + std::to_string(joint));
      g.payoff_ops.push_back(std::move(h));
    }
  } else {
    const Json& tables = in.array(block / "tables");
    if (tables.size() != g.players()) in.fail(block / "tables", "need one payoff table per player");
    for (std::size_t p = 0; p < tables.size(); ++p) {
      std::vector<double> values;
      read_table(in, block / "tables" / p, g.dims, values);
      g.payoff_ops.push_back(CMatrix::diagonal(std::span<const double>(values)));
    }
  }

  if (in.root().at(block).contains("labels")) {
    const Json& labels = in.array(block / "labels");
    if (labels.size() != g.players()) in.fail(block / "labels", "need one label list per player");
    for (std::size_t p = 0; p < labels.size(); ++p) {
      const Json& list = in.array(block / "labels" / p);
      if (list.size() != g.dims[p])
        in.fail(block / "labels" / p, "player " + std::to_string(p + 1) + " needs " +
                                          std::to_string(g.dims[p]) + " labels");
      std::vector<std::string> names;
      for (std::size_t k = 0; k < list.size(); ++k) names.push_back(in.text(block / "labels" / p / k));
      g.basis_labels.push_back(std::move(names));
    }
  }
  fill_default_labels(g);
  in.anchored(block, [&] {
    g.validate();
    return 0;
  });
  return g;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t line) : Error(message), line_(line) {}

AnyGame parse_game(std::string_view text, std::string_view source) {
  const Reader in(text, source);
  if (in.root().contains("abstract")) return read_abstract(in);
  return read_manipulative(in);
}

AnyGame load_game(const std::string& spec) {
  constexpr std::string_view kPrefix = "builtin:";
  if (spec.starts_with(kPrefix)) {
    const std::string name = spec.substr(kPrefix.size());
    try {
      return builtin(name);
    } catch (const DomainError& e) {
      throw ParseError(spec + ": " + e.what(), 0);
    }
  }
  return parse_game(read_text_file(spec), spec);
}

StrategyProfile parse_profile(std::string_view text, std::string_view source) {
  const Reader in(text, source);
  bool restricted = false;
  if (in.root().contains("restricted")) {
    const Json& r = in.at(kRoot / "restricted");
    if (!r.is_boolean()) in.fail(kRoot / "restricted", "'restricted' must be true or false");
    restricted = r.get<bool>();
  }
  const bool product = in.root().contains("product");
  const bool joint = in.root().contains("joint");
  if (product == joint) in.fail(kRoot, "profile needs exactly one of 'product' or 'joint'");
  if (joint) {
    DensityMatrix rho = in.density(kRoot / "joint");
    return in.anchored(kRoot / "joint", [&] { return StrategyProfile::joint(std::move(rho), restricted); });
  }
  const Json& factors = in.array(kRoot / "product");
  if (factors.empty()) in.fail(kRoot / "product", "product profile has no factors");
  std::vector<DensityMatrix> states;
  for (std::size_t p = 0; p < factors.size(); ++p) states.push_back(in.density(kRoot / "product" / p));
  return in.anchored(kRoot / "product", [&] { return StrategyProfile::product(std::move(states), restricted); });
}

StrategyProfile load_profile(const std::string& path) { return parse_profile(read_text_file(path), path); }

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.dim(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json game_to_json(const AbstractGame& game) {
  Json block;
  block["dims"] = game.dims;
  block["labels"] = game.basis_labels;
  Json ops = Json::array();
  for (const auto& h : game.payoff_ops) ops.push_back(matrix_to_json(h));
  block["payoffs"] = std::move(ops);
  Json out;
  out["name"] = game.name;
  out["abstract"] = std::move(block);
  return out;
}

Json profile_to_json(const StrategyProfile& profile) {
  Json out;
  if (profile.is_product()) {
    Json factors = Json::array();
    for (const auto& f : profile.factors()) factors.push_back(matrix_to_json(f.matrix()));
    out["product"] = std::move(factors);
  } else {
    out["joint"] = matrix_to_json(profile.joint_matrix());
  }
  out["restricted"] = profile.restricted();
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file", 0);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open file for writing", 0);
  out << text;
  if (!out) throw ParseError(path + ": write failed", 0);
}

}  // namespace hamgame::io
