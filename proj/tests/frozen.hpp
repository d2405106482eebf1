// Reference values frozen from an extended-precision (60-digit) bisection
// of the defining equations, independent of the library implementation.
// The x-space oracle in oracle.hpp reproduces them to ~1e-11; the library
// must match them to the tolerances asserted in the tests.
#ifndef CATLAB_TESTS_FROZEN_HPP
#define CATLAB_TESTS_FROZEN_HPP

namespace frozen {

// Critical control levels T_c(gamma), alpha = 2.
inline constexpr double kTc_0185 = 0.30010507633662509;
inline constexpr double kXfold_0185 = 0.81614468496510811;
inline constexpr double kTc_05 = 0.13931479815939168;
inline constexpr double kTc_025 = 0.25945764619620596;
inline constexpr double kTc_02 = 0.29021440787521896;
inline constexpr double kTc_029 = 0.23690097915736859;

// QRE roots for gamma = 0.185, alpha = 2.
inline constexpr double kRootsT025[3] = {0.0093278689920007194, 0.69609835870704606,
                                         0.94280945764269851};
inline constexpr double kRootT1 = 0.40951532801474236;
inline constexpr double kRootT04 = 0.067568158973456650;
inline constexpr double kRootsT005[3] = {5.0958986245071521e-11, 0.60294363695750740,
                                         0.99999991663162104};

// Minimum QRE at T = 0.1 for the perturbation interval around gamma = 0.3.
inline constexpr double kMinRoot_g025_T01 = 3.7269170710153788e-6;
inline constexpr double kMinRoot_g035_T01 = 1.3709947988256887e-6;

// Boltzmann self-consistency residual at x = 0.9, T = 0.25, gamma = 0.185.
inline constexpr double kBoltzResidual = -0.021289662829464771;

// T(x; gamma) at x = 0.8, gamma = 0.1: 0.5 / ln 4.
inline constexpr double kTofX_08_01 = 0.36067376022224085;

// Turning points at T = 0.25.
inline constexpr double kXl_T025 = 0.14644660940672624;
inline constexpr double kXu_T025 = 0.85355339059327376;

}  // namespace frozen

#endif  // CATLAB_TESTS_FROZEN_HPP
