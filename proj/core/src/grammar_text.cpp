#include "lanedit/errors.hpp"
#include "lanedit/grammar.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace lanedit {

namespace {

bool is_nonterminal_token(std::string_view tok) {
  return !tok.empty() && std::isupper(static_cast<unsigned char>(tok.front()));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Grammar parse_grammar_text(std::string_view text) {
  Grammar g;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  bool any = false;
  std::size_t with_prob = 0, without_prob = 0;
  std::size_t first_mixed_line = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto arrow = line.find("->");
    if (arrow == std::string_view::npos) throw GrammarError("expected 'LHS -> ...'", line_no);
    std::string_view lhs = trim(line.substr(0, arrow));
    std::string_view rest = trim(line.substr(arrow + 2));
    if (lhs.empty() || lhs.find_first_of(" \t") != std::string_view::npos)
      throw GrammarError("left-hand side must be a single symbol", line_no);
    if (!is_nonterminal_token(lhs))
      throw GrammarError("left-hand side '" + std::string(lhs) + "' is not a nonterminal", line_no);

    std::optional<Rational> prob;
    if (!rest.empty() && rest.back() == ']') {
      auto open = rest.rfind('[');
      if (open == std::string_view::npos) throw GrammarError("unbalanced ']'", line_no);
      std::string_view ptext = trim(rest.substr(open + 1, rest.size() - open - 2));
      try {
        prob = parse_rational(ptext);
      } catch (const InvalidArgument&) {
        throw GrammarError("bad probability '" + std::string(ptext) + "'", line_no);
      }
      if (*prob <= 0 || *prob > 1)
        throw GrammarError("probability " + to_string(*prob) + " outside (0, 1]", line_no);
      rest = trim(rest.substr(0, open));
    }
    if (rest.find_first_of("[]") != std::string_view::npos)
      throw GrammarError("stray bracket", line_no);

    Production p;
    p.lhs = g.intern_nonterminal(lhs);
    if (!any) {
      g.set_start(p.lhs);
      any = true;
    }
    std::istringstream toks{std::string(rest)};
    std::string tok;
    std::vector<std::string> words;
    while (toks >> tok) words.push_back(tok);
    if (words.empty()) throw GrammarError("empty right-hand side (use EPS)", line_no);
    if (words.size() == 1 && words[0] == "EPS") {
      // empty right side
    } else {
      for (const std::string& w : words) {
        if (w == "EPS") throw GrammarError("EPS must stand alone", line_no);
        p.rhs.push_back(is_nonterminal_token(w) ? Symbol::nt(g.intern_nonterminal(w))
                                                : Symbol::t(g.intern_terminal(w)));
      }
    }
    if (prob) {
      ++with_prob;
    } else {
      ++without_prob;
    }
    if (with_prob && without_prob && !first_mixed_line) first_mixed_line = line_no;
    p.prob = prob;
    g.add_production(std::move(p));
  }
  if (first_mixed_line)
    throw GrammarError("mixed stochastic and non-stochastic productions", first_mixed_line);
  if (!any) throw GrammarError("no productions");
  return g;
}

Grammar load_grammar_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open grammar file '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_grammar_text(buf.str());
}

void validate_scfg(const Grammar& g) {
  std::map<NonterminalId, Rational> sums;
  for (const Production& p : g.productions()) {
    if (!p.prob) throw DistributionError("production without probability");
    if (*p.prob <= 0)
      throw DistributionError("non-positive probability for " + g.nonterminal_name(p.lhs));
    sums[p.lhs] += *p.prob;
  }
  for (const auto& [nt, sum] : sums)
    if (sum != 1)
      throw DistributionError("probabilities of " + g.nonterminal_name(nt) + " sum to " +
                              to_string(sum));
}

Scfg make_scfg(const Grammar& g) {
  if (!g.is_stochastic()) throw DistributionError("grammar has no probabilities");
  validate_scfg(g);
  Scfg out{g.is_cnf() ? g : to_cnf(g)};
  validate_scfg(out.grammar);
  return out;
}

}  // namespace lanedit
