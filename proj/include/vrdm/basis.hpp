#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "vrdm/geometry.hpp"

namespace vrdm {

struct GaussianPrimitive {
  double exponent;    // bohr^-2
  double coefficient; // contraction coefficient (on normalized primitives)
};

// Contracted s-type Gaussian shell. Exponents must be strictly positive
// and strictly decreasing; normalize() rescales the contraction so the
// self-overlap of the contracted function is exactly 1.
struct ContractedShell {
  Eigen::Vector3d center; // bohr
  std::vector<GaussianPrimitive> primitives;

  void validate() const;
  void normalize();
};

// Parses a basis data table of the form
//   element <symbol>
//   <exponent> <coefficient>
//   ...
// and returns the primitive list for the requested element.
std::vector<GaussianPrimitive> parse_basis_table(const std::string& text,
                                                 const std::string& element);

std::vector<GaussianPrimitive> load_basis_file(const std::string& path,
                                               const std::string& element);

// One shell per atom, centered on it, contraction renormalized.
std::vector<ContractedShell> shells_for_geometry(
    const Geometry& g, const std::vector<GaussianPrimitive>& prims);

} // namespace vrdm
