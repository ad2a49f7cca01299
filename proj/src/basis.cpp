#include "vrdm/basis.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "vrdm/constants.hpp"

namespace vrdm {

namespace {

// <g_a|g_b> for unit-normalized s primitives on a common center
double primitive_pair_overlap(double a, double b) {
  return std::pow(4.0 * a * b / ((a + b) * (a + b)), 0.75);
}

} // namespace

void ContractedShell::validate() const {
  if (primitives.empty())
    throw std::invalid_argument("shell: no primitives");
  double prev = std::numeric_limits<double>::infinity();
  bool any_nonzero = false;
  for (const auto& p : primitives) {
    if (p.exponent <= 0.0)
      throw std::invalid_argument("shell: exponents must be positive");
    if (p.exponent >= prev)
      throw std::invalid_argument("shell: exponents must be strictly decreasing");
    prev = p.exponent;
    if (p.coefficient != 0.0) any_nonzero = true;
  }
  if (!any_nonzero)
    throw std::invalid_argument("shell: all contraction coefficients are zero");
}

void ContractedShell::normalize() {
  validate();
  double s = 0.0;
  for (const auto& p : primitives)
    for (const auto& q : primitives)
      s += p.coefficient * q.coefficient *
           primitive_pair_overlap(p.exponent, q.exponent);
  if (s <= 0.0) throw std::invalid_argument("shell: non-positive self-overlap");
  const double scale = 1.0 / std::sqrt(s);
  for (auto& p : primitives) p.coefficient *= scale;
}

std::vector<GaussianPrimitive> parse_basis_table(const std::string& text,
                                                 const std::string& element) {
  std::istringstream in(text);
  std::string line;
  std::vector<GaussianPrimitive> prims;
  bool in_element = false, found = false;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "element") {
      std::string sym;
      ls >> sym;
      in_element = (sym == element);
      found = found || in_element;
      continue;
    }
    if (!in_element) continue;
    GaussianPrimitive p{};
    std::istringstream vs(line);
    if (!(vs >> p.exponent >> p.coefficient))
      throw std::runtime_error("basis table: malformed primitive line: " + line);
    prims.push_back(p);
  }
  if (!found || prims.empty())
    throw std::runtime_error("basis table: unsupported element " + element);
  return prims;
}

std::vector<GaussianPrimitive> load_basis_file(const std::string& path,
                                               const std::string& element) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("basis table: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_basis_table(ss.str(), element);
}

std::vector<ContractedShell> shells_for_geometry(
    const Geometry& g, const std::vector<GaussianPrimitive>& prims) {
  std::vector<ContractedShell> shells;
  shells.reserve(g.atoms.size());
  for (const auto& atom : g.atoms) {
    ContractedShell sh{atom.position, prims};
    sh.normalize();
    shells.push_back(std::move(sh));
  }
  return shells;
}

} // namespace vrdm
