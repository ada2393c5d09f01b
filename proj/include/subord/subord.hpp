#ifndef SUBORD_SUBORD_HPP
#define SUBORD_SUBORD_HPP

#include "subord/version.hpp"
#include "subord/errors.hpp"
#include "subord/extended.hpp"
#include "subord/gamma.hpp"
#include "subord/quadrature.hpp"
#include "subord/special_functions.hpp"
#include "subord/bernstein.hpp"
#include "subord/laplace_inversion.hpp"
#include "subord/convderiv.hpp"
#include "subord/grid_function.hpp"
#include "subord/residual_report.hpp"
#include "subord/random.hpp"
#include "subord/parallel.hpp"
#include "subord/inverse_subordinator.hpp"
#include "subord/poisson_tc.hpp"
#include "subord/skellam_tc.hpp"
#include "subord/montecarlo.hpp"

#endif  // SUBORD_SUBORD_HPP
