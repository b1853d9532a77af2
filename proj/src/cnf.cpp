#include "rubiksat/cnf.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <sstream>

namespace rubiksat {

Var Formula::new_var(std::string label) {
  labels_.push_back(std::move(label));
  return static_cast<Var>(labels_.size());
}

const std::string& Formula::label(Var v) const {
  if (v < 1 || v > num_vars()) throw std::out_of_range("variable id out of range");
  return labels_[static_cast<std::size_t>(v) - 1];
}

void Formula::add_clause(std::vector<Lit> lits, ClauseKind kind, int step) {
  if (lits.empty()) throw std::invalid_argument("empty clause");
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (!lits[i].valid() || lits[i].var() > num_vars())
      throw std::invalid_argument("clause literal refers to an unallocated variable");
    for (std::size_t j = i + 1; j < lits.size(); ++j) {
      if (lits[i] == lits[j]) throw std::invalid_argument("duplicate literal in clause");
      if (lits[i] == ~lits[j]) throw std::invalid_argument("complementary literals in clause");
    }
  }
  clauses_.push_back(Clause{std::move(lits), kind, step});
}

std::string Formula::to_dimacs() const {
  std::ostringstream out;
  for (Var v = 1; v <= num_vars(); ++v) {
    const std::string& l = label(v);
    if (!l.empty()) out << "c v " << v << ' ' << l << '\n';
  }
  out << "p cnf " << num_vars() << ' ' << clauses_.size() << '\n';
  for (const Clause& c : clauses_) {
    for (Lit l : c.lits) out << l.to_dimacs() << ' ';
    out << "0\n";
  }
  return out.str();
}

std::string Formula::varmap_sidecar() const {
  std::ostringstream out;
  for (Var v = 1; v <= num_vars(); ++v) out << v << ' ' << label(v) << '\n';
  return out.str();
}

Formula Formula::from_dimacs(std::string_view text) {
  Formula f;
  int declared_vars = -1;
  long declared_clauses = -1;
  std::vector<std::pair<Var, std::string>> labels;

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  std::vector<Lit> pending;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == 'c') {
      std::istringstream ls(line);
      std::string c, tag;
      Var v;
      if (ls >> c >> tag >> v && tag == "v") {
        std::string label;
        std::getline(ls, label);
        if (!label.empty() && label[0] == ' ') label.erase(0, 1);
        labels.emplace_back(v, label);
      }
      continue;
    }
    if (line[0] == 'p') {
      std::istringstream ls(line);
      std::string p, cnf;
      if (!(ls >> p >> cnf >> declared_vars >> declared_clauses) || cnf != "cnf")
        throw DimacsError(line_no, "malformed problem line");
      while (f.num_vars() < declared_vars) f.new_var();
      continue;
    }
    if (declared_vars < 0) throw DimacsError(line_no, "clause before problem line");
    std::istringstream ls(line);
    int code;
    while (ls >> code) {
      if (code == 0) {
        if (pending.empty()) throw DimacsError(line_no, "empty clause");
        f.add_clause(std::move(pending));
        pending.clear();
      } else {
        if (std::abs(code) > declared_vars)
          throw DimacsError(line_no, "literal exceeds declared variable count");
        pending.push_back(Lit::from_dimacs(code));
      }
    }
    if (!ls.eof()) throw DimacsError(line_no, "unparsable token in clause");
  }
  if (!pending.empty()) throw DimacsError(line_no, "clause not terminated by 0");
  if (declared_clauses >= 0 && static_cast<long>(f.num_clauses()) != declared_clauses)
    throw DimacsError(line_no, "clause count does not match header");
  for (auto& [v, label] : labels) {
    if (v >= 1 && v <= f.num_vars()) f.labels_[static_cast<std::size_t>(v) - 1] = std::move(label);
  }
  return f;
}

void encode_alo(Formula& f, std::span<const Lit> lits, ClauseKind kind, int step) {
  if (lits.empty()) throw std::invalid_argument("ALO over empty literal set");
  f.add_clause({lits.begin(), lits.end()}, kind, step);
}

void encode_amo_pairwise(Formula& f, std::span<const Lit> lits) {
  for (std::size_t i = 0; i < lits.size(); ++i)
    for (std::size_t j = i + 1; j < lits.size(); ++j)
      f.add_clause({~lits[i], ~lits[j]});
}

void encode_amo_product(Formula& f, std::span<const Lit> lits, std::string_view aux_prefix) {
  const int n = static_cast<int>(lits.size());
  if (n < 2) throw std::invalid_argument("product AMO needs at least 2 literals");
  const int p = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  const int q = (n + p - 1) / p;

  std::vector<Lit> us, vs;
  for (int i = 1; i <= p; ++i)
    us.push_back(pos(f.new_var(std::string(aux_prefix) + ".u" + std::to_string(i))));
  for (int j = 1; j <= q; ++j)
    vs.push_back(pos(f.new_var(std::string(aux_prefix) + ".v" + std::to_string(j))));

  // x_k with k = (i-1)q + j selects row i and column j.
  for (int k = 1; k <= n; ++k) {
    const int i = (k - 1) / q;
    const int j = (k - 1) % q;
    f.add_clause({~lits[static_cast<std::size_t>(k - 1)], us[static_cast<std::size_t>(i)]});
    f.add_clause({~lits[static_cast<std::size_t>(k - 1)], vs[static_cast<std::size_t>(j)]});
  }
  encode_amo_pairwise(f, us);
  encode_amo_pairwise(f, vs);
}

void encode_exactly_one(Formula& f, std::span<const Lit> lits, AmoMethod method,
                        std::string_view aux_prefix, ClauseKind alo_kind, int alo_step) {
  encode_alo(f, lits, alo_kind, alo_step);
  if (method == AmoMethod::pairwise || lits.size() < 2)
    encode_amo_pairwise(f, lits);
  else
    encode_amo_product(f, lits, aux_prefix);
}

void encode_conditional_exactly_one(Formula& f, Lit guard, std::span<const Lit> lits) {
  if (lits.empty()) throw std::invalid_argument("conditional EO over empty literal set");
  std::vector<Lit> clause{~guard};
  clause.insert(clause.end(), lits.begin(), lits.end());
  f.add_clause(std::move(clause));
  encode_amo_pairwise(f, lits);
}

}  // namespace rubiksat
