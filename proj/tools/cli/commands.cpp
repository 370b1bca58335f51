#include "commands.hpp"

#include "lanedit/editdist.hpp"
#include "lanedit/errors.hpp"
#include "lanedit/oracles.hpp"
#include "lanedit/reductions.hpp"
#include "lanedit/scfg.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace lanedit::cli {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct Common {
  std::string grammar_path;
  std::string text;
  std::string string_file;
  bool json = false;
  bool timings = false;
};

struct Timer {
  Json phases = Json::object();
  Clock::time_point last = Clock::now();

  void lap(const char* name) {
    auto now = Clock::now();
    phases[name] = std::chrono::duration<double>(now - last).count();
    last = now;
  }
};

std::string read_text(const Common& c) {
  if (c.string_file.empty()) return c.text;
  std::ifstream in(c.string_file);
  if (!in) throw InputError("cannot open string file " + c.string_file);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

Json symbols(const Grammar& g, const TerminalString& s) {
  Json a = Json::array();
  for (TerminalId t : s) a.push_back(g.terminal_name(t));
  return a;
}

// Shortest decimal that reads back to the same double.
std::string num(double v) {
  if (std::isinf(v)) return "inf";
  std::string s;
  for (int p = 1; p <= 17; ++p) {
    std::ostringstream t;
    t << std::setprecision(p) << v;
    s = t.str();
    if (std::stod(s) == v) break;
  }
  return s;
}

void emit(std::ostream& out, const Json& report, bool as_json, const std::function<void()>& text) {
  if (as_json)
    out << report.dump(2) << "\n";
  else
    text();
}

Json script_json(const Grammar& g, const EditScript& sc) {
  Json ops = Json::array();
  for (const EditOp& op : sc.ops)
    ops.push_back(Json{{"op", to_string(op.kind)}, {"position", op.position}, {"symbol", g.terminal_name(op.symbol)}});
  return ops;
}

void print_script(std::ostream& out, const Grammar& g, const TerminalString& s, const EditScript& sc) {
  out << "script_cost " << num(sc.cost) << "\n";
  for (const EditOp& op : sc.ops) out << to_string(op.kind) << " " << op.position << " " << g.terminal_name(op.symbol) << "\n";
  out << "result " << decode_string(g, apply_script(s, sc)) << "\n";
}

Backend parse_backend(const std::string& name) {
  if (name == "naive") return Backend::naive;
  if (name == "boolean") return Backend::boolean;
  if (name == "bigint") return Backend::bigint;
  throw InvalidArgument("unknown backend " + name);
}

ClosureAlgorithm parse_algorithm(const std::string& name) {
  if (name == "naive") return ClosureAlgorithm::naive;
  if (name == "valiant") return ClosureAlgorithm::valiant;
  throw InvalidArgument("unknown closure algorithm " + name);
}

int cmd_parse(const Common& c, std::ostream& out) {
  Timer timer;
  Grammar g = load_grammar_file(c.grammar_path);
  TerminalString s = encode_string(g, read_text(c));
  Grammar cnf = to_cnf(g);
  timer.lap("load");
  const bool member = cyk_recognize(cnf, s);
  timer.lap("recognize");

  Json report{{"command", "parse"}, {"parameters", {{"grammar", c.grammar_path}}},
              {"result", {{"string", symbols(g, s)}, {"member", member}}}};
  if (c.timings) report["timings"] = timer.phases;
  emit(out, report, c.json, [&] { out << (member ? "member" : "non-member") << "\n"; });
  return member ? kOk : kNonMember;
}

struct EditOptions {
  bool exact = false;
  std::optional<double> eps;
  std::uint64_t seed = 0;
  bool local = false;
  bool script = false;
  unsigned threads = 1;
  std::string backend = "naive";
  std::string algorithm = "valiant";
  bool sidon = false;
};

int cmd_editdist(const Common& c, const EditOptions& o, std::ostream& out) {
  Timer timer;
  Grammar g = load_grammar_file(c.grammar_path);
  TerminalString s = encode_string(g, read_text(c));
  timer.lap("load");

  LedOptions lo;
  lo.backend = parse_backend(o.backend);
  lo.algorithm = parse_algorithm(o.algorithm);
  lo.use_sidon = o.sidon;

  Json params{{"grammar", c.grammar_path}, {"mode", o.eps ? "approx" : "exact"}, {"backend", o.backend},
              {"algorithm", o.algorithm}, {"sidon", o.sidon}};
  Json result{{"string", symbols(g, s)}};

  if (!o.eps) {
    ExactLed full = led_exact_full(g, s, lo);
    timer.lap("closure");
    EditScript sc = retrieve_script(full.ctx, full.closure, 0, s.size());
    timer.lap("script");
    result["distance"] = full.distance;
    if (o.script) result["script"] = script_json(g, sc);
    if (o.local) {
      Json loc = Json::array();
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j <= s.size(); ++j)
          loc.push_back(Json{{"i", i}, {"j", j}, {"estimate", full.substring_distance(i, j)}, {"exact", true}});
      result["local"] = loc;
    }
    Json report{{"command", "editdist"}, {"parameters", params}, {"result", result}};
    if (c.timings) report["timings"] = timer.phases;
    emit(out, report, c.json, [&] {
      out << "distance " << full.distance << "\n";
      if (o.script) print_script(out, g, s, sc);
      if (o.local) {
        out << "i\tj\testimate\texact\n";
        for (std::size_t i = 0; i < s.size(); ++i)
          for (std::size_t j = i + 1; j <= s.size(); ++j) out << i << "\t" << j << "\t" << full.substring_distance(i, j) << "\t1\n";
      }
    });
    return kOk;
  }

  ApproxOptions ao;
  static_cast<LedOptions&>(ao) = lo;
  ao.seed = o.seed;
  ao.threads = o.threads;
  LocalEstimates est = led_approx(g, s, *o.eps, ao);
  timer.lap("approx");
  params["eps"] = *o.eps;
  params["seed"] = o.seed;
  result["estimate"] = est.full();
  result["runs"] = est.eta;
  result["delta"] = est.delta;
  if (o.script) result["script"] = script_json(g, est.script);
  if (o.local) {
    Json loc = Json::array();
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j <= s.size(); ++j)
        loc.push_back(Json{{"i", i}, {"j", j}, {"estimate", est.at(i, j)}, {"exact", est.is_exact(i, j)}});
    result["local"] = loc;
  }
  Json report{{"command", "editdist"}, {"parameters", params}, {"result", result}};
  if (c.timings) report["timings"] = timer.phases;
  emit(out, report, c.json, [&] {
    out << "estimate " << num(est.full()) << "\n";
    out << "eps " << num(*o.eps) << "\nseed " << o.seed << "\nruns " << est.eta << "\n";
    if (o.script) print_script(out, g, s, est.script);
    if (o.local) {
      out << "i\tj\testimate\texact\n";
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j <= s.size(); ++j)
          out << i << "\t" << j << "\t" << num(est.at(i, j)) << "\t" << (est.is_exact(i, j) ? 1 : 0) << "\n";
    }
  });
  return kOk;
}

Json parse_json(const Grammar& g, const ScoredParse& p) {
  Json steps = Json::array();
  for (const ParseStep& st : p.steps) {
    std::string rhs;
    for (const Symbol& x : st.production.rhs) {
      if (!rhs.empty()) rhs += " ";
      rhs += x.is_terminal() ? g.terminal_name(x.id) : g.nonterminal_name(x.id);
    }
    steps.push_back(Json{{"lhs", g.nonterminal_name(st.production.lhs)},
                         {"rhs", rhs.empty() ? "EPS" : rhs},
                         {"prob", st.production.prob ? to_string(*st.production.prob) : "1"},
                         {"begin", st.begin},
                         {"end", st.end}});
  }
  return steps;
}

struct ScfgOptions {
  std::optional<double> eps;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

int cmd_scfg(const Common& c, const ScfgOptions& o, std::ostream& out) {
  Timer timer;
  Grammar raw = load_grammar_file(c.grammar_path);
  Scfg g = make_scfg(raw);
  TerminalString s = encode_string_strict(g.grammar, read_text(c));
  timer.lap("load");

  Json params{{"grammar", c.grammar_path}, {"mode", o.eps ? "approx" : "exact"}};
  std::optional<ScoredParse> parse;
  Json result{{"string", symbols(g.grammar, s)}};
  if (o.eps) {
    ApproxOptions ao;
    ao.seed = o.seed;
    ao.threads = o.threads;
    ScfgApproxResult r = viterbi_approx(g, s, *o.eps, ao);
    params["eps"] = *o.eps;
    params["seed"] = o.seed;
    result["runs"] = r.eta;
    parse = r.parse;
  } else {
    parse = viterbi_exact(g, s);
  }
  timer.lap("parse");
  result["member"] = parse.has_value();
  if (parse) {
    result["probability"] = to_string(parse->probability);
    result["score"] = parse->score;
    result["estimate"] = parse->estimate;
    result["tree"] = parse_json(g.grammar, *parse);
  }
  Json report{{"command", "scfg"}, {"parameters", params}, {"result", result}};
  if (c.timings) report["timings"] = timer.phases;
  emit(out, report, c.json, [&] {
    if (!parse) {
      out << "non-member\n";
      return;
    }
    out << "probability " << to_string(parse->probability) << "\n";
    out << "score " << num(parse->score) << "\n";
    out << "estimate " << num(parse->estimate) << "\n";
    for (const Json& st : result["tree"])
      out << st["lhs"].get<std::string>() << " -> " << st["rhs"].get<std::string>() << " ["
          << st["prob"].get<std::string>() << "] " << st["begin"].get<std::size_t>() << " "
          << st["end"].get<std::size_t>() << "\n";
  });
  return parse ? kOk : kNonMember;
}

struct ReduceOptions {
  std::string kind;
  std::vector<std::string> files;
  bool verify = false;
  std::optional<std::int64_t> bound;
  std::string product = "scfg";
  bool json = false;
};

std::string entry_text(const std::optional<Rational>& v) { return v ? to_string(*v) : "inf"; }

int cmd_reduce(const ReduceOptions& o, std::ostream& out) {
  Json params{{"kind", o.kind}, {"verify", o.verify}};
  Json result;
  bool ok = true;
  std::ostringstream text;

  if (o.kind == "minplus-led" || o.kind == "mintimes-scfg") {
    if (o.files.size() != 2) throw InvalidArgument(o.kind + " takes two matrix files");
    if (o.kind == "minplus-led") {
      IntMatrix a = load_int_matrix(o.files[0]), b = load_int_matrix(o.files[1]);
      IntMatrix c = distance_product_via_led(a, b);
      std::ostringstream m;
      write_int_matrix(m, c);
      result["product"] = m.str();
      text << m.str();
      if (o.verify) ok = c == oracle::min_plus_naive(a, b);
    } else {
      RationalMatrix a = load_rational_matrix(o.files[0]), b = load_rational_matrix(o.files[1]);
      RationalEntryMatrix c = min_times_via_scfg(a, b);
      std::ostringstream m;
      m << c.rows() << "\n";
      for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j) m << entry_text(c(i, j)) << (j + 1 == c.cols() ? "\n" : " ");
      result["product"] = m.str();
      text << m.str();
      if (o.verify) {
        RationalMatrix ref = oracle::min_times_naive(a, b);
        for (std::size_t i = 0; i < c.rows(); ++i)
          for (std::size_t j = 0; j < c.cols(); ++j) ok = ok && c(i, j) && *c(i, j) == ref(i, j);
      }
    }
  } else if (o.kind == "negtriangle") {
    if (o.files.size() != 1) throw InvalidArgument("negtriangle takes one weight matrix file");
    IntMatrix w = load_int_matrix(o.files[0]);
    std::int64_t bound = 3;
    for (std::size_t i = 0; i < w.rows(); ++i)
      for (std::size_t j = 0; j < w.cols(); ++j)
        if (i != j && w(i, j)) bound = std::max<std::int64_t>(bound, *w(i, j) < 0 ? -*w(i, j) : *w(i, j));
    if (o.bound) bound = *o.bound;
    MinTimesProduct product;
    if (o.product == "scfg") {
      product = [](const RationalMatrix& a, const RationalMatrix& b) {
        RationalEntryMatrix c = min_times_via_scfg(a, b);
        RationalMatrix r(c.rows(), c.cols());
        for (std::size_t i = 0; i < c.rows(); ++i)
          for (std::size_t j = 0; j < c.cols(); ++j) {
            if (!c(i, j)) throw InvalidArgument("product has an infinite entry");
            r(i, j) = *c(i, j);
          }
        return r;
      };
    } else if (o.product == "naive") {
      product = oracle::min_times_naive;
    } else {
      throw InvalidArgument("unknown product " + o.product);
    }
    params["bound"] = bound;
    params["product"] = o.product;
    TriangleReport rep = negative_triangle_via_min_times(w, bound, product);
    result["found"] = rep.found;
    if (rep.witness) result["witness"] = Json::array({rep.witness->first, rep.witness->second});
    if (rep.min_shifted) result["min_shifted"] = rep.min_shifted->str();
    text << (rep.found ? "found" : "none");
    if (rep.witness) text << " " << rep.witness->first << " " << rep.witness->second;
    text << "\n";
    if (rep.min_shifted) text << "min_shifted " << rep.min_shifted->str() << "\n";
    if (o.verify) ok = rep.found == oracle::triangle_naive(w);
  } else {
    throw InvalidArgument("unknown reduction " + o.kind);
  }

  if (o.verify) {
    result["verify"] = ok ? "OK" : "MISMATCH";
    text << "verify " << (ok ? "OK" : "MISMATCH") << "\n";
  }
  Json report{{"command", "reduce"}, {"parameters", params}, {"result", result}};
  emit(out, report, o.json, [&] { out << text.str(); });
  return ok ? kOk : kNonMember;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("grammar", c.grammar_path, "grammar file")->required();
  sub->add_option("string", c.text, "input string: whitespace-separated symbols, or one symbol per character");
  sub->add_option("--string-file", c.string_file, "read the input string from a file");
  sub->add_flag("--json", c.json, "print the run report as JSON");
  sub->add_flag("--timings", c.timings, "include per-phase timings in the report");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Language edit distance, SCFG parsing and reductions"};
  app.require_subcommand(1);

  Common common;
  EditOptions eo;
  ScfgOptions so;
  ReduceOptions ro;

  CLI::App* parse = app.add_subcommand("parse", "CYK membership");
  add_common(parse, common);

  CLI::App* ed = app.add_subcommand("editdist", "language edit distance");
  add_common(ed, common);
  CLI::Option* exact = ed->add_flag("--exact", eo.exact, "exact distance (default)");
  ed->add_option("--eps", eo.eps, "approximation parameter in (0, 1]")->excludes(exact);
  ed->add_option("--seed", eo.seed, "seed of the randomized runs");
  ed->add_flag("--local", eo.local, "print estimates for every substring as TSV");
  ed->add_flag("--script", eo.script, "print an edit script");
  ed->add_option("--threads", eo.threads, "worker threads for the randomized runs")->check(CLI::Range(1u, 256u));
  ed->add_option("--backend", eo.backend, "matrix product backend: naive, boolean, bigint");
  ed->add_option("--algorithm", eo.algorithm, "closure algorithm: naive, valiant");
  ed->add_flag("--sidon", eo.sidon, "decode sums through a Sidon mapping");

  CLI::App* sc = app.add_subcommand("scfg", "most probable parse");
  add_common(sc, common);
  CLI::Option* sexact = sc->add_flag("--exact", "exact Viterbi parse (default)");
  sc->add_option("--eps", so.eps, "approximation parameter in (0, 1]")->excludes(sexact);
  sc->add_option("--seed", so.seed, "seed of the randomized runs");
  sc->add_option("--threads", so.threads, "worker threads for the randomized runs")->check(CLI::Range(1u, 256u));

  CLI::App* red = app.add_subcommand("reduce", "matrix products through grammar instances");
  red->add_option("kind", ro.kind, "minplus-led, mintimes-scfg or negtriangle")
      ->required()
      ->check(CLI::IsMember({"minplus-led", "mintimes-scfg", "negtriangle"}));
  red->add_option("matrices", ro.files, "matrix files")->required();
  red->add_flag("--verify", ro.verify, "compare with the naive product");
  red->add_option("--bound", ro.bound, "weight bound W for negtriangle (default max |w|, at least 3)");
  red->add_option("--product", ro.product, "min-times product for negtriangle: scfg or naive");
  red->add_flag("--json", ro.json, "print the run report as JSON");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (eo.eps && !(*eo.eps > 0 && *eo.eps <= 1)) throw InvalidArgument("--eps must lie in (0, 1]");
    if (so.eps && !(*so.eps > 0 && *so.eps <= 1)) throw InvalidArgument("--eps must lie in (0, 1]");
    if (*parse) return cmd_parse(common, out);
    if (*ed) return cmd_editdist(common, eo, out);
    if (*sc) return cmd_scfg(common, so, out);
    return cmd_reduce(ro, out);
  } catch (const EmptyLanguageError& e) {
    err << "error: " << e.what() << "\n";
    return kEmptyLanguage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace lanedit::cli
