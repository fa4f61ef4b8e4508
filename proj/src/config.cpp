#include "anosov/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace anosov {

ConfigError::ConfigError(std::string field, int line, const std::string& message)
    : Error(message), field_(std::move(field)), line_(line) {}

namespace {

// JSON pointer -> line of the value it names, from a structural scan of the
// source text (the parser does not keep positions).
std::map<std::string, int> pointer_lines(const std::string& text) {
  struct Frame {
    bool object = false;
    std::string path;
    int index = 0;
    std::string key;
    bool expect_key = false;
  };
  std::map<std::string, int> lines;
  std::vector<Frame> stack;
  int line = 1;
  auto path = [&]() -> std::string {
    if (stack.empty()) return "";
    const Frame& f = stack.back();
    return f.path + "/" + (f.object ? f.key : std::to_string(f.index));
  };
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
    } else if (std::isspace(static_cast<unsigned char>(c)) || c == ':') {
      continue;
    } else if (c == '"') {
      const int start = line;
      std::string s;
      for (++i; i < n && text[i] != '"'; ++i) {
        if (text[i] == '\\' && i + 1 < n) s += text[i++];
        if (text[i] == '\n') ++line;
        s += text[i];
      }
      if (!stack.empty() && stack.back().object && stack.back().expect_key) {
        stack.back().key = s;
        stack.back().expect_key = false;
      } else {
        lines.emplace(path(), start);
      }
    } else if (c == '{' || c == '[') {
      lines.emplace(path(), line);
      Frame f;
      f.object = c == '{';
      f.path = path();
      f.expect_key = f.object;
      stack.push_back(std::move(f));
    } else if (c == '}' || c == ']') {
      if (!stack.empty()) stack.pop_back();
    } else if (c == ',') {
      if (!stack.empty()) {
        if (stack.back().object) {
          stack.back().expect_key = true;
        } else {
          ++stack.back().index;
        }
      }
    } else {
      lines.emplace(path(), line);
      while (i + 1 < n && std::string_view(",]} \t\r\n").find(text[i + 1]) == std::string_view::npos) ++i;
    }
  }
  return lines;
}

int line_at(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

class Schema {
 public:
  Schema(std::string source, std::map<std::string, int> lines)
      : source_(std::move(source)), lines_(std::move(lines)) {}

  [[noreturn]] void fail(const std::string& ptr, const std::string& message) const {
    std::string p = ptr;
    auto it = lines_.find(p);
    while (it == lines_.end() && !p.empty()) {
      p = p.substr(0, p.rfind('/'));
      it = lines_.find(p);
    }
    const int line = it == lines_.end() ? 0 : it->second;
    const std::string field = ptr.empty() ? "/" : ptr;
    throw ConfigError(field, line,
                      source_ + ":" + std::to_string(line) + ": " + field + ": " + message);
  }

  void only(const Json& obj, const std::string& ptr, std::initializer_list<const char*> keys) const {
    for (const auto& [key, value] : obj.items()) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
        fail(ptr + "/" + key, "unknown field");
      }
    }
  }

  const Json& object(const Json& j, const std::string& ptr) const {
    if (!j.is_object()) fail(ptr, "expected an object");
    return j;
  }

  const Json* member(const Json& obj, const char* key) const {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  const Json& required(const Json& obj, const std::string& ptr, const char* key) const {
    const Json* v = member(obj, key);
    if (!v) fail(ptr + "/" + key, "missing required field");
    return *v;
  }

  long long integer(const Json& j, const std::string& ptr, long long min) const {
    if (!j.is_number_integer()) fail(ptr, "expected an integer");
    const long long v = j.get<long long>();
    if (v < min) fail(ptr, "must be at least " + std::to_string(min));
    return v;
  }

  double number(const Json& j, const std::string& ptr) const {
    if (!j.is_number()) fail(ptr, "expected a number");
    return j.get<double>();
  }

  std::string string(const Json& j, const std::string& ptr) const {
    if (!j.is_string()) fail(ptr, "expected a string");
    return j.get<std::string>();
  }

  Matrix matrix(const Json& j, const std::string& ptr) const {
    if (!j.is_array() || j.empty()) fail(ptr, "expected a non-empty array of rows");
    std::vector<double> flat;
    int n = 0;
    if (j.front().is_array()) {
      n = static_cast<int>(j.size());
      for (std::size_t r = 0; r < j.size(); ++r) {
        const std::string rp = ptr + "/" + std::to_string(r);
        if (!j[r].is_array() || static_cast<int>(j[r].size()) != n) {
          fail(rp, "expected a row of " + std::to_string(n) + " numbers (square matrix)");
        }
        for (std::size_t c = 0; c < j[r].size(); ++c) {
          flat.push_back(number(j[r][c], rp + "/" + std::to_string(c)));
        }
      }
    } else {
      for (std::size_t c = 0; c < j.size(); ++c) flat.push_back(number(j[c], ptr + "/" + std::to_string(c)));
      while (n * n < static_cast<int>(flat.size())) ++n;
      if (n * n != static_cast<int>(flat.size())) fail(ptr, "flat matrix length is not a square");
    }
    Matrix m(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) m(r, c) = flat[static_cast<std::size_t>(r * n + c)];
    }
    return m;
  }

 private:
  std::string source_;
  std::map<std::string, int> lines_;
};

FunctorChain parse_chain(const Schema& s, const Json& j, const std::string& ptr);

FunctorStep parse_step(const Schema& s, const Json& j, const std::string& ptr) {
  s.object(j, ptr);
  const std::string op = s.string(s.required(j, ptr, "op"), ptr + "/op");
  if (op == "tau") {
    s.only(j, ptr, {"op", "d"});
    return {TauStep{static_cast<int>(s.integer(s.required(j, ptr, "d"), ptr + "/d", 1))}};
  }
  if (op == "wedge") {
    s.only(j, ptr, {"op", "k"});
    return {WedgeStep{static_cast<int>(s.integer(s.required(j, ptr, "k"), ptr + "/k", 1))}};
  }
  if (op == "sym2") {
    s.only(j, ptr, {"op"});
    return {Sym2Step{}};
  }
  if (op == "su21") {
    s.only(j, ptr, {"op"});
    return {Su21Step{}};
  }
  if (op == "perturb") {
    s.only(j, ptr, {"op", "eps", "seed"});
    PerturbStep p;
    p.eps = s.number(s.required(j, ptr, "eps"), ptr + "/eps");
    p.seed = static_cast<std::uint64_t>(s.integer(s.required(j, ptr, "seed"), ptr + "/seed", 0));
    return {p};
  }
  if (op == "conjugate") {
    s.only(j, ptr, {"op", "by"});
    return {ConjugateStep{s.matrix(s.required(j, ptr, "by"), ptr + "/by")}};
  }
  if (op == "direct_sum") {
    s.only(j, ptr, {"op", "parts"});
    const Json& parts = s.required(j, ptr, "parts");
    if (!parts.is_array() || parts.size() < 2) {
      s.fail(ptr + "/parts", "expected an array of at least two chains");
    }
    DirectSumStep sum;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      sum.parts.push_back(parse_chain(s, parts[i], ptr + "/parts/" + std::to_string(i)));
    }
    return {sum};
  }
  s.fail(ptr + "/op", "unknown functor '" + op +
                          "' (expected tau, wedge, sym2, su21, direct_sum, perturb or conjugate)");
}

FunctorChain parse_chain(const Schema& s, const Json& j, const std::string& ptr) {
  if (!j.is_array()) s.fail(ptr, "expected an array of functor steps");
  FunctorChain chain;
  for (std::size_t i = 0; i < j.size(); ++i) {
    chain.push_back(parse_step(s, j[i], ptr + "/" + std::to_string(i)));
  }
  return chain;
}

Recipe parse_recipe(const Schema& s, const Json& j, const std::string& ptr) {
  s.object(j, ptr);
  s.only(j, ptr, {"generators", "chain"});
  const Json& gens = s.required(j, ptr, "generators");
  const std::string gp = ptr + "/generators";
  if (!gens.is_array()) s.fail(gp, "expected an array of generators");
  if (gens.empty()) s.fail(gp, "at least one generator required");
  Recipe recipe;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string p = gp + "/" + std::to_string(i);
    const Json& g = s.object(gens[i], p);
    s.only(g, p, {"label", "matrix", "re", "im"});
    const std::string label = g.contains("label") ? s.string(g["label"], p + "/label")
                                                  : std::string(1, static_cast<char>('a' + i));
    if (label.empty()) s.fail(p + "/label", "label must be non-empty");
    recipe.base.labels.push_back(label);
    if (g.contains("matrix")) {
      if (g.contains("re") || g.contains("im")) s.fail(p, "give either matrix or re/im, not both");
      const Matrix m = s.matrix(g["matrix"], p + "/matrix");
      try {
        MatrixD::normalize_lift(m);
      } catch (const Error& e) {
        s.fail(p + "/matrix", e.what());
      }
      recipe.base.real.push_back(m);
    } else if (g.contains("re")) {
      const Matrix re = s.matrix(g["re"], p + "/re");
      const Matrix im = g.contains("im") ? s.matrix(g["im"], p + "/im") : Matrix::Zero(re.rows(), re.cols());
      if (im.rows() != re.rows()) s.fail(p + "/im", "re and im must have the same size");
      ComplexMatrix c(re.rows(), re.cols());
      c.real() = re;
      c.imag() = im;
      recipe.base.complex.push_back(c);
    } else {
      s.fail(p + "/matrix", "missing required field");
    }
  }
  if (!recipe.base.real.empty() && !recipe.base.complex.empty()) {
    s.fail(gp, "generators must be all real or all complex");
  }
  if (const Json* chain = s.member(j, "chain")) recipe.chain = parse_chain(s, *chain, ptr + "/chain");
  return recipe;
}

enum class ParamType { Int, Number, String, Ints, Numbers, Strings, Pair };

struct ParamSpec {
  const char* key;
  ParamType type;
  Json fallback;  // null: optional without default
  bool required = false;
};

struct KindSpec {
  std::vector<ParamSpec> params;
  bool needs_seed = false;
};

const std::map<std::string, KindSpec>& kind_specs() {
  using T = ParamType;
  static const std::map<std::string, KindSpec> specs = {
      {"certify", {{{"k", T::Ints, Json::array({1})},
                    {"slope_min", T::Number, 0.05},
                    {"r2_min", T::Number, 0.9}}}},
      {"alpha", {{{"m", T::Int, nullptr, true},
                  {"tol", T::Number, 1e-9},
                  {"irreducibility_radius", T::Int, 3}}}},
      {"limitset", {{{"m", T::Int, nullptr, true},
                     {"gap_tol", T::Number, 1e-6},
                     {"anchor", T::Int, 0},
                     {"partner", T::Int, nullptr},
                     {"sep_tol", T::Number, 1e-3},
                     {"max_pairs", T::Int, 200000},
                     {"margin_tol", T::Number, 1e-12}},
                    true}},
      {"hyperconvex", {{{"m", T::Int, nullptr, true},
                        {"triples", T::Int, 500},
                        {"sep_tol", T::Number, 1e-3},
                        {"margin_tol", T::Number, 1e-12}},
                       true}},
      {"hoelder", {{{"m", T::Int, nullptr, true},
                    {"anchors", T::Int, 3},
                    {"delta_min", T::Number, 1e-5},
                    {"delta_max", T::Number, 1e-1},
                    {"metric", T::String, "sine"},
                    {"expected", T::Pair, nullptr}}}},
      {"cones", {{{"n_min", T::Int, 4}, {"max_mean", T::Number, nullptr}}}},
      {"gelfand", {{{"index", T::Int, 1},
                    {"powers", T::Int, 500},
                    {"words", T::Strings, Json::array()},
                    {"tol", T::Number, 1e-3}}}},
      {"perturb-sweep", {{{"eps", T::Numbers, nullptr, true},
                          {"k", T::Int, 1},
                          {"m", T::Int, nullptr}},
                         true}},
  };
  return specs;
}

Json parse_param(const Schema& s, const ParamSpec& spec, const Json& v, const std::string& ptr) {
  switch (spec.type) {
    case ParamType::Int:
      return s.integer(v, ptr, 0);
    case ParamType::Number:
      return s.number(v, ptr);
    case ParamType::String:
      return s.string(v, ptr);
    case ParamType::Ints:
    case ParamType::Numbers:
    case ParamType::Strings:
    case ParamType::Pair: {
      Json out = Json::array();
      if (spec.type == ParamType::Ints && v.is_number_integer()) {
        out.push_back(s.integer(v, ptr, 0));
        return out;
      }
      if (!v.is_array()) s.fail(ptr, "expected an array");
      if (spec.type == ParamType::Pair && v.size() != 2) s.fail(ptr, "expected [low, high]");
      if (spec.type == ParamType::Numbers && v.empty()) s.fail(ptr, "expected a non-empty array");
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = ptr + "/" + std::to_string(i);
        if (spec.type == ParamType::Ints) {
          out.push_back(s.integer(v[i], p, 0));
        } else if (spec.type == ParamType::Strings) {
          out.push_back(s.string(v[i], p));
        } else {
          out.push_back(s.number(v[i], p));
        }
      }
      return out;
    }
  }
  return nullptr;
}

void check_range(const Schema& s, const Json& params, const std::string& ptr, const char* key,
                 int lo, int hi) {
  if (!params.contains(key) || params[key].is_null()) return;
  auto check = [&](long long v, const std::string& p) {
    if (v < lo || v > hi) {
      s.fail(p, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "] for this representation");
    }
  };
  const Json& v = params[key];
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) check(v[i].get<long long>(), ptr + "/" + key + "/" + std::to_string(i));
  } else {
    check(v.get<long long>(), ptr + "/" + key);
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const int line = line_at(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError("/", line, source + ":" + std::to_string(line) + ": syntax error: " + e.what());
  }
  const Schema s(source, pointer_lines(text));
  s.object(root, "");
  s.only(root, "", {"name", "description", "representation", "radius", "seed", "experiment", "output"});

  ExperimentConfig cfg;
  cfg.name = root.contains("name") ? s.string(root["name"], "/name") : source;
  cfg.description = root.contains("description") ? s.string(root["description"], "/description") : "";
  cfg.recipe = parse_recipe(s, s.required(root, "", "representation"), "/representation");
  if (root.contains("radius")) cfg.radius = static_cast<int>(s.integer(root["radius"], "/radius", 0));
  if (root.contains("seed")) cfg.seed = static_cast<std::uint64_t>(s.integer(root["seed"], "/seed", 0));

  // Replay the chain one step at a time so dimension errors point at the step.
  int dim = 0;
  {
    const FunctorChain& chain = cfg.recipe.chain;
    const std::size_t first = cfg.recipe.base.complex.empty() ? 0 : 1;
    for (std::size_t i = first; i <= chain.size(); ++i) {
      Recipe partial{cfg.recipe.base, FunctorChain(chain.begin(), chain.begin() + static_cast<std::ptrdiff_t>(i))};
      try {
        dim = Representation::from_recipe(partial).dim();
      } catch (const Error& e) {
        s.fail(i == 0 ? std::string("/representation") : "/representation/chain/" + std::to_string(i - 1),
               e.what());
      }
    }
  }

  const Json& exp = s.object(s.required(root, "", "experiment"), "/experiment");
  cfg.kind = s.string(s.required(exp, "/experiment", "kind"), "/experiment/kind");
  const auto& specs = kind_specs();
  auto spec_it = specs.find(cfg.kind);
  if (spec_it == specs.end()) {
    std::string kinds;
    for (const auto& k : experiment_kinds()) kinds += (kinds.empty() ? "" : ", ") + k;
    s.fail("/experiment/kind", "unknown experiment kind '" + cfg.kind + "' (expected one of " + kinds + ")");
  }
  const KindSpec& spec = spec_it->second;
  cfg.params = Json::object();
  for (const auto& [key, value] : exp.items()) {
    if (key == "kind") continue;
    const auto p = std::find_if(spec.params.begin(), spec.params.end(),
                                [&](const ParamSpec& ps) { return key == ps.key; });
    if (p == spec.params.end()) s.fail("/experiment/" + key, "unknown parameter for kind " + cfg.kind);
    cfg.params[key] = parse_param(s, *p, value, "/experiment/" + key);
  }
  for (const auto& p : spec.params) {
    if (cfg.params.contains(p.key)) continue;
    if (p.required) s.fail(std::string("/experiment/") + p.key, "missing required field");
    cfg.params[p.key] = p.fallback;
  }
  if (spec.needs_seed && !cfg.seed) s.fail("/seed", "seed required for kind " + cfg.kind);

  const std::string ep = "/experiment";
  if (cfg.kind == "alpha" || cfg.kind == "hyperconvex" || cfg.kind == "hoelder") {
    check_range(s, cfg.params, ep, "m", 2, dim - 1);
  } else if (cfg.kind == "limitset") {
    check_range(s, cfg.params, ep, "m", 1, dim - 1);
  } else if (cfg.kind == "certify" || cfg.kind == "perturb-sweep") {
    check_range(s, cfg.params, ep, "k", 1, dim - 1);
    check_range(s, cfg.params, ep, "m", 2, dim - 1);
  } else if (cfg.kind == "gelfand") {
    check_range(s, cfg.params, ep, "index", 1, dim);
  }
  if (cfg.kind == "hoelder") {
    const std::string metric = cfg.params["metric"];
    if (metric != "sine" && metric != "chordal") s.fail(ep + "/metric", "expected \"sine\" or \"chordal\"");
    if (!(cfg.params["delta_min"].get<double>() > 0.0) ||
        !(cfg.params["delta_max"].get<double>() > cfg.params["delta_min"].get<double>())) {
      s.fail(ep + "/delta_min", "window must satisfy 0 < delta_min < delta_max");
    }
  }
  if ((cfg.kind == "limitset" || cfg.kind == "hyperconvex") &&
      !(cfg.params["sep_tol"].get<double>() >= 0.0)) {
    s.fail(ep + "/sep_tol", "must be non-negative");
  }

  cfg.out_dir = "out/" + cfg.name;
  if (const Json* out = s.member(root, "output")) {
    s.object(*out, "/output");
    s.only(*out, "/output", {"dir"});
    if (out->contains("dir")) cfg.out_dir = s.string((*out)["dir"], "/output/dir");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  ExperimentConfig cfg = parse_config(buf.str(), path.string());
  if (!cfg.name.empty() && cfg.name == path.string()) cfg.name = path.stem().string();
  if (cfg.out_dir == "out/" + path.string()) cfg.out_dir = "out/" + cfg.name;
  return cfg;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

Json chain_json(const FunctorChain& chain) {
  Json out = Json::array();
  for (const auto& step : chain) {
    std::visit(
        [&](const auto& st) {
          using S = std::decay_t<decltype(st)>;
          if constexpr (std::is_same_v<S, TauStep>) {
            out.push_back({{"op", "tau"}, {"d", st.d}});
          } else if constexpr (std::is_same_v<S, WedgeStep>) {
            out.push_back({{"op", "wedge"}, {"k", st.k}});
          } else if constexpr (std::is_same_v<S, Sym2Step>) {
            out.push_back({{"op", "sym2"}});
          } else if constexpr (std::is_same_v<S, Su21Step>) {
            out.push_back({{"op", "su21"}});
          } else if constexpr (std::is_same_v<S, PerturbStep>) {
            out.push_back({{"op", "perturb"}, {"eps", st.eps}, {"seed", st.seed}});
          } else if constexpr (std::is_same_v<S, ConjugateStep>) {
            out.push_back({{"op", "conjugate"}, {"by", matrix_json(st.by)}});
          } else if constexpr (std::is_same_v<S, DirectSumStep>) {
            Json parts = Json::array();
            for (const auto& p : st.parts) parts.push_back(chain_json(p));
            out.push_back({{"op", "direct_sum"}, {"parts", parts}});
          }
        },
        step.op);
  }
  return out;
}

}  // namespace

Json recipe_to_json(const Recipe& recipe) {
  Json gens = Json::array();
  for (std::size_t i = 0; i < recipe.base.labels.size(); ++i) {
    Json g = {{"label", recipe.base.labels[i]}};
    if (!recipe.base.real.empty()) {
      g["matrix"] = matrix_json(recipe.base.real[i]);
    } else {
      g["re"] = matrix_json(recipe.base.complex[i].real());
      g["im"] = matrix_json(recipe.base.complex[i].imag());
    }
    gens.push_back(g);
  }
  return {{"generators", gens}, {"chain", chain_json(recipe.chain)}};
}

Recipe recipe_from_json(const Json& j) {
  const Schema s("recipe", {});
  return parse_recipe(s, j, "");
}

Json config_to_json(const ExperimentConfig& config) {
  Json experiment = {{"kind", config.kind}};
  for (const auto& [key, value] : config.params.items()) {
    if (!value.is_null()) experiment[key] = value;
  }
  Json out = {{"name", config.name},
              {"description", config.description},
              {"representation", recipe_to_json(config.recipe)},
              {"radius", config.radius},
              {"experiment", experiment},
              {"output", {{"dir", config.out_dir}}}};
  if (config.seed) out["seed"] = *config.seed;
  return out;
}

std::string config_hash(const ExperimentConfig& config) {
  Json canonical = config_to_json(config);
  canonical.erase("output");
  const std::string text = canonical.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace anosov
