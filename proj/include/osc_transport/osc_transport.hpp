#pragma once

// Library umbrella. io.hpp and cli.hpp need the vendored headers and are
// included separately.
#include <osc_transport/error.hpp>
#include <osc_transport/core.hpp>
#include <osc_transport/roots.hpp>
#include <osc_transport/parallel.hpp>
#include <osc_transport/fixed_solver.hpp>
#include <osc_transport/variable_solver.hpp>
#include <osc_transport/pmp.hpp>
#include <osc_transport/oracle.hpp>
