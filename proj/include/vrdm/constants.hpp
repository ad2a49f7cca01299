#pragma once

namespace vrdm {

// CODATA-style conversion used throughout; geometries are specified in
// angstrom on the user side and stored in bohr internally.
inline constexpr double angstrom_to_bohr = 1.8897259886;

inline constexpr double pi = 3.14159265358979323846;

} // namespace vrdm
