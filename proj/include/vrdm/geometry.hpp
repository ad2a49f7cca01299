#pragma once

#include <Eigen/Dense>
#include <vector>

namespace vrdm {

struct Atom {
  double charge;            // nuclear charge Z
  Eigen::Vector3d position; // bohr
};

// A molecular geometry. Charges are positive and no two centers may
// coincide (pairwise distance > 1e-10 bohr); validate() enforces both.
struct Geometry {
  std::vector<Atom> atoms;

  void validate() const;
  double nuclear_repulsion() const;
};

// n hydrogen atoms equally spaced on a circle of radius R (angstrom) in
// the z=0 plane, first atom on the +x axis.
Geometry ring_geometry(int n, double radius_angstrom);

} // namespace vrdm
