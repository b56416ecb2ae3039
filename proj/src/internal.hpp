#ifndef HFBL_SRC_INTERNAL_HPP
#define HFBL_SRC_INTERNAL_HPP

#include "hfbl/types.hpp"

namespace hfbl::detail {

bool strict_far_field(const Trajectory& traj, double eps_far);
bool fp_shrinking_tail(const Trajectory& traj);
bool dplus_certificate(const Trajectory& traj);
bool unbounded_certificate(const Trajectory& traj);
bool dminus_certificate(const Trajectory& traj, double t0);

}  // namespace hfbl::detail

#endif
