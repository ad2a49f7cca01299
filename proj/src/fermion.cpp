#include "vrdm/fermion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace vrdm {

namespace {

// key for accumulating identical strings
std::string string_key(const std::vector<FermiOp>& ops) {
  std::string k;
  k.reserve(ops.size() * 4);
  for (const auto& o : ops) {
    k += o.dagger ? '+' : '-';
    k += std::to_string(o.index);
    k += ';';
  }
  return k;
}

// Returns the position of the first ordering violation, or -1 if the
// string is in canonical normal order.
int first_violation(const std::vector<FermiOp>& ops) {
  for (std::size_t i = 0; i + 1 < ops.size(); ++i) {
    const auto& a = ops[i];
    const auto& b = ops[i + 1];
    if (!a.dagger && b.dagger) return static_cast<int>(i);
    if (a.dagger && b.dagger && a.index >= b.index) return static_cast<int>(i);
    if (!a.dagger && !b.dagger && a.index <= b.index) return static_cast<int>(i);
  }
  return -1;
}

} // namespace

OperatorPolynomial normal_order(const std::vector<FermiOp>& ops) {
  std::map<std::string, std::pair<std::vector<FermiOp>, double>> acc;
  std::vector<FermiTerm> work;
  work.push_back({1.0, ops});

  while (!work.empty()) {
    FermiTerm t = std::move(work.back());
    work.pop_back();
    const int v = first_violation(t.ops);
    if (v < 0) {
      auto& slot = acc[string_key(t.ops)];
      slot.first = t.ops;
      slot.second += t.coeff;
      continue;
    }
    const FermiOp a = t.ops[v];
    const FermiOp b = t.ops[v + 1];
    if (a.dagger == b.dagger) {
      if (a.index == b.index) continue; // nilpotent, term vanishes
      std::swap(t.ops[v], t.ops[v + 1]);
      t.coeff = -t.coeff;
      work.push_back(std::move(t));
      continue;
    }
    // a (annihilator) followed by b (creator)
    if (a.index == b.index) {
      FermiTerm contracted;
      contracted.coeff = t.coeff;
      contracted.ops.reserve(t.ops.size() - 2);
      contracted.ops.insert(contracted.ops.end(), t.ops.begin(), t.ops.begin() + v);
      contracted.ops.insert(contracted.ops.end(), t.ops.begin() + v + 2, t.ops.end());
      work.push_back(std::move(contracted));
    }
    std::swap(t.ops[v], t.ops[v + 1]);
    t.coeff = -t.coeff;
    work.push_back(std::move(t));
  }

  OperatorPolynomial out;
  out.terms.reserve(acc.size());
  for (auto& [key, val] : acc) {
    (void)key;
    if (std::abs(val.second) > 1e-14)
      out.terms.push_back({val.second, std::move(val.first)});
  }
  return out;
}

std::vector<FermiOp> parse_operator_string(const std::string& s) {
  std::istringstream in(s);
  std::string tok;
  std::vector<FermiOp> ops;
  while (in >> tok) {
    if (tok.size() < 2 || tok[0] != 'a')
      throw std::invalid_argument("operator string: bad token '" + tok + "'");
    bool dagger = false;
    std::size_t pos = 1;
    if (tok[1] == '+') {
      dagger = true;
      pos = 2;
    }
    if (pos >= tok.size())
      throw std::invalid_argument("operator string: missing index in '" + tok + "'");
    int idx = 0;
    for (; pos < tok.size(); ++pos) {
      if (!std::isdigit(static_cast<unsigned char>(tok[pos])))
        throw std::invalid_argument("operator string: bad index in '" + tok + "'");
      idx = idx * 10 + (tok[pos] - '0');
    }
    ops.push_back({idx, dagger});
  }
  return ops;
}

std::string to_string(const FermiTerm& t) {
  std::ostringstream os;
  os << t.coeff;
  for (const auto& o : t.ops) os << " a" << (o.dagger ? "+" : "") << o.index;
  return os.str();
}

std::string to_string(const OperatorPolynomial& p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.terms.size(); ++i) {
    if (i) os << "  +  ";
    os << to_string(p.terms[i]);
  }
  return os.str();
}

} // namespace vrdm
