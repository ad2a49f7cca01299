#include "vrdm/constraint_map.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace vrdm {

ConditionName condition_from_string(const std::string& s) {
  static const std::map<std::string, ConditionName> lut = {
      {"D2", ConditionName::D2}, {"Q2", ConditionName::Q2},
      {"G2", ConditionName::G2}, {"T1", ConditionName::T1},
      {"T2", ConditionName::T2}, {"D3", ConditionName::D3},
      {"E3", ConditionName::E3}, {"F3", ConditionName::F3},
      {"Q3", ConditionName::Q3}};
  const auto it = lut.find(s);
  if (it == lut.end())
    throw std::invalid_argument("unsupported condition name: " + s);
  return it->second;
}

std::string to_string(ConditionName c) {
  switch (c) {
    case ConditionName::D2: return "D2";
    case ConditionName::Q2: return "Q2";
    case ConditionName::G2: return "G2";
    case ConditionName::T1: return "T1";
    case ConditionName::T2: return "T2";
    case ConditionName::D3: return "D3";
    case ConditionName::E3: return "E3";
    case ConditionName::F3: return "F3";
    case ConditionName::Q3: return "Q3";
  }
  return "?";
}

int index_space_dim(IndexSpace s, int r) {
  switch (s) {
    case IndexSpace::Pair: return static_cast<int>(binomial(r, 2));
    case IndexSpace::OrbSq: return r * r;
    case IndexSpace::Triple: return static_cast<int>(binomial(r, 3));
    case IndexSpace::PairPlus: return static_cast<int>(binomial(r, 2)) * r;
  }
  return 0;
}

namespace {

IndexSpace space_of(ConditionName c) {
  switch (c) {
    case ConditionName::D2:
    case ConditionName::Q2: return IndexSpace::Pair;
    case ConditionName::G2: return IndexSpace::OrbSq;
    case ConditionName::T1:
    case ConditionName::D3:
    case ConditionName::Q3: return IndexSpace::Triple;
    case ConditionName::T2:
    case ConditionName::E3:
    case ConditionName::F3: return IndexSpace::PairPlus;
  }
  throw std::logic_error("unreachable");
}

// decode a composite row index into its orbital tuple
std::vector<int> decode(IndexSpace s, int idx, const PairIndexer& pairs,
                        const TripleIndexer& triples, int r) {
  switch (s) {
    case IndexSpace::Pair: {
      const auto& p = pairs.pair(idx);
      return {p[0], p[1]};
    }
    case IndexSpace::OrbSq: return {idx / r, idx % r};
    case IndexSpace::Triple: {
      const auto& t = triples.triple(idx);
      return {t[0], t[1], t[2]};
    }
    case IndexSpace::PairPlus: {
      const auto& p = pairs.pair(idx / r);
      return {p[0], p[1], idx % r};
    }
  }
  throw std::logic_error("unreachable");
}

// Bra-side operator factors of the metric matrix <B_I B_J^+>.
// The ket side is the formal adjoint of the same factors for index J.
std::vector<FermiOp> bra_ops(ConditionName c, const std::vector<int>& t) {
  switch (c) {
    case ConditionName::D2: return {{t[0], true}, {t[1], true}};
    case ConditionName::Q2: return {{t[0], false}, {t[1], false}};
    case ConditionName::G2: return {{t[0], true}, {t[1], false}};
    case ConditionName::D3:
      return {{t[0], true}, {t[1], true}, {t[2], true}};
    case ConditionName::Q3:
      return {{t[0], false}, {t[1], false}, {t[2], false}};
    case ConditionName::E3:
      return {{t[0], true}, {t[1], true}, {t[2], false}};
    case ConditionName::F3:
      return {{t[0], false}, {t[1], false}, {t[2], true}};
    default: throw std::logic_error("bra_ops: composite condition");
  }
}

std::vector<FermiOp> adjoint_reversed(const std::vector<FermiOp>& ops) {
  std::vector<FermiOp> out;
  out.reserve(ops.size());
  for (auto it = ops.rbegin(); it != ops.rend(); ++it)
    out.push_back({it->index, !it->dagger});
  return out;
}

// Converts a canonical normal-ordered term into a MapTerm.
MapTerm classify(const FermiTerm& t, const PairIndexer& pairs,
                 const TripleIndexer& triples) {
  const auto& ops = t.ops;
  MapTerm mt;
  mt.coeff = t.coeff;
  if (ops.empty()) {
    mt.kind = MapTerm::Constant;
    return mt;
  }
  const std::size_t n = ops.size();
  if (n % 2 != 0) throw std::logic_error("map term: unbalanced string");
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < half; ++i)
    if (!ops[i].dagger || ops[half + i].dagger)
      throw std::logic_error("map term: string not particle conserving");
  if (half == 1) {
    mt.kind = MapTerm::OneBody;
    mt.a = ops[0].index;
    mt.b = ops[1].index;
  } else if (half == 2) {
    // creators ascending, annihilators descending: <a+_p a+_q a_t a_s>
    // = m2[(p,q),(s,t)]
    mt.kind = MapTerm::TwoBody;
    mt.a = pairs(ops[0].index, ops[1].index);
    mt.b = pairs(ops[3].index, ops[2].index);
  } else if (half == 3) {
    mt.kind = MapTerm::ThreeBody;
    mt.a = triples(ops[0].index, ops[1].index, ops[2].index);
    mt.b = triples(ops[5].index, ops[4].index, ops[3].index);
  } else {
    throw std::logic_error("map term: rank above three-body");
  }
  // RDMs of real wave functions are symmetric; storing canonical (a,b)
  // lets opposite-transpose contributions cancel (T1, T2)
  if (mt.a > mt.b) std::swap(mt.a, mt.b);
  return mt;
}

void merge_terms(std::vector<MapTerm>& terms) {
  std::map<std::tuple<int, int, int>, double> acc;
  for (const auto& t : terms)
    acc[{static_cast<int>(t.kind), t.a, t.b}] += t.coeff;
  terms.clear();
  for (const auto& [key, c] : acc) {
    if (std::abs(c) < 1e-14) continue;
    MapTerm t;
    t.kind = static_cast<MapTerm::Kind>(std::get<0>(key));
    t.a = std::get<1>(key);
    t.b = std::get<2>(key);
    t.coeff = c;
    terms.push_back(t);
  }
}

} // namespace

void accumulate_functional(std::vector<MapTerm>& out,
                           const std::vector<FermiOp>& ops, double weight,
                           const PairIndexer& pairs,
                           const TripleIndexer& triples) {
  const OperatorPolynomial poly = normal_order(ops);
  for (const auto& term : poly.terms) {
    MapTerm mt = classify(term, pairs, triples);
    mt.coeff *= weight;
    out.push_back(mt);
  }
}

double evaluate_functional(const std::vector<MapTerm>& terms,
                           const RawRdms& rdms) {
  double v = 0.0;
  for (const auto& t : terms) {
    switch (t.kind) {
      case MapTerm::Constant: v += t.coeff; break;
      case MapTerm::OneBody: v += t.coeff * rdms.gamma(t.a, t.b); break;
      case MapTerm::TwoBody: v += t.coeff * rdms.m2(t.a, t.b); break;
      case MapTerm::ThreeBody: v += t.coeff * rdms.m3(t.a, t.b); break;
    }
  }
  return v;
}

ConstraintMap build_constraint_map(ConditionName name, int r_spin) {
  if (r_spin < 2) throw std::invalid_argument("constraint map: r_spin too small");

  ConstraintMap map;
  map.name = name;
  map.space = space_of(name);
  map.r_spin = r_spin;
  map.pairs_ = PairIndexer(r_spin);
  map.triples_ = TripleIndexer(r_spin);
  map.dim = index_space_dim(map.space, r_spin);
  const std::size_t n_upper =
      static_cast<std::size_t>(map.dim) * (map.dim + 1) / 2;
  map.offsets_.reserve(n_upper + 1);
  map.offsets_.push_back(0);

  // T1 and T2 are sums of two metric matrices on the same index space
  std::vector<ConditionName> parts;
  if (name == ConditionName::T1)
    parts = {ConditionName::D3, ConditionName::Q3};
  else if (name == ConditionName::T2)
    parts = {ConditionName::E3, ConditionName::F3};
  else
    parts = {name};

  map.three_body_free = true;
  std::vector<MapTerm> slot;
  for (int i = 0; i < map.dim; ++i) {
    const auto ti = decode(map.space, i, map.pairs_, map.triples_, r_spin);
    for (int j = i; j < map.dim; ++j) {
      const auto tj = decode(map.space, j, map.pairs_, map.triples_, r_spin);
      slot.clear();
      for (const auto part : parts) {
        std::vector<FermiOp> ops = bra_ops(part, ti);
        const auto ket = adjoint_reversed(bra_ops(part, tj));
        ops.insert(ops.end(), ket.begin(), ket.end());
        accumulate_functional(slot, ops, 1.0, map.pairs_, map.triples_);
      }
      merge_terms(slot);
      for (const auto& t : slot) {
        if (t.kind == MapTerm::ThreeBody) map.three_body_free = false;
        map.terms_.push_back(t);
      }
      map.offsets_.push_back(map.terms_.size());
    }
  }
  return map;
}

ConstraintMap build_constraint_map(const std::string& name, int r_spin) {
  return build_constraint_map(condition_from_string(name), r_spin);
}

Eigen::MatrixXd ConstraintMap::apply(const RawRdms& rdms) const {
  if (rdms.r_spin != r_spin)
    throw std::invalid_argument("constraint map: rank mismatch");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      double v = 0.0;
      for (const auto& t : element(i, j)) {
        switch (t.kind) {
          case MapTerm::Constant: v += t.coeff; break;
          case MapTerm::OneBody: v += t.coeff * rdms.gamma(t.a, t.b); break;
          case MapTerm::TwoBody: v += t.coeff * rdms.m2(t.a, t.b); break;
          case MapTerm::ThreeBody:
            if (rdms.m3.size() == 0)
              throw std::invalid_argument(
                  "constraint map: three-body RDM required for " +
                  to_string(name));
            v += t.coeff * rdms.m3(t.a, t.b);
            break;
        }
      }
      out(i, j) = out(j, i) = v;
    }
  return out;
}

std::vector<int> ConstraintMap::row_orbitals(int idx) const {
  return decode(space, idx, pairs_, triples_, r_spin);
}

std::vector<FermiOp> ConstraintMap::element_string(int i, int j) const {
  // only meaningful for the metric conditions, not the T sums
  std::vector<FermiOp> ops = bra_ops(name, row_orbitals(i));
  const auto ket = adjoint_reversed(bra_ops(name, row_orbitals(j)));
  ops.insert(ops.end(), ket.begin(), ket.end());
  return ops;
}

void ConstraintMap::serialize(std::ostream& os) const {
  os << "map " << to_string(name) << " r_spin " << r_spin << " dim " << dim
     << "\n";
  static const char* kind_names[] = {"const", "g", "m2", "m3"};
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j)
      for (const auto& t : element(i, j)) {
        os << i << " " << j << " " << kind_names[t.kind] << " " << t.a << " "
           << t.b << " ";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", t.coeff);
        os << buf << "\n";
      }
}

int row_sz2(const ConstraintMap& map, int idx) {
  const auto orbs = map.row_orbitals(idx);
  // leading particles count +, trailing hole (if any) counts -
  int n_particle = 0;
  switch (map.name) {
    case ConditionName::D2:
    case ConditionName::Q2: n_particle = 2; break;
    case ConditionName::G2: n_particle = 1; break;
    case ConditionName::T1:
    case ConditionName::D3:
    case ConditionName::Q3: n_particle = 3; break;
    case ConditionName::T2:
    case ConditionName::E3:
    case ConditionName::F3: n_particle = 2; break;
  }
  int sz2 = 0;
  for (std::size_t k = 0; k < orbs.size(); ++k) {
    const int s = (orbs[k] % 2 == 0) ? 1 : -1;
    sz2 += (static_cast<int>(k) < n_particle) ? s : -s;
  }
  return sz2;
}

} // namespace vrdm
