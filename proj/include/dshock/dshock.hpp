#pragma once

#include "dshock/errors.hpp"
#include "dshock/numerics.hpp"
#include "dshock/state.hpp"
#include "dshock/flux_model.hpp"
#include "dshock/wave_curves.hpp"
#include "dshock/riemann_solver.hpp"
#include "dshock/limit_analysis.hpp"
#include "dshock/entropy.hpp"
#include "dshock/weak_form.hpp"
#include "dshock/fv_oracle.hpp"
