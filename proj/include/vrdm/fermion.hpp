#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vrdm {

// A single creation/annihilation operator acting on a spin orbital.
struct FermiOp {
  int index;
  bool dagger;

  bool operator==(const FermiOp&) const = default;
};

// One normal-ordered term: coeff * a+_{i1} ... a+_{ik} a_{j1} ... a_{jm}
// with creator indices strictly ascending and annihilator indices
// strictly descending. This ordering makes the map onto RDM elements
// sign-free: <a+_p a+_q a_t a_s> with p<q, t>s is the pair-basis element
// ((p,q),(s,t)) of the raw 2-RDM directly.
struct FermiTerm {
  double coeff;
  std::vector<FermiOp> ops;
};

// Sum of normal-ordered terms; no duplicate strings, no zero coefficients.
struct OperatorPolynomial {
  std::vector<FermiTerm> terms;

  std::size_t size() const { return terms.size(); }
};

// Full normal ordering by iterated anticommutation,
// {a_p, a+_q} = delta_pq, {a_p, a_q} = {a+_p, a+_q} = 0.
OperatorPolynomial normal_order(const std::vector<FermiOp>& ops);

// Parses strings like "a+2 a+0 a1 a3" (a+N creation, aN annihilation).
// Throws std::invalid_argument on malformed tokens.
std::vector<FermiOp> parse_operator_string(const std::string& s);

std::string to_string(const FermiTerm& t);
std::string to_string(const OperatorPolynomial& p);

} // namespace vrdm
