#pragma once

#include "torickems/errors.hpp"
#include "torickems/exact.hpp"
#include "torickems/fixtures.hpp"
#include "torickems/flow_mis.hpp"
#include "torickems/invariants.hpp"
#include "torickems/lattice_polytope.hpp"
#include "torickems/mis_analyzer.hpp"
#include "torickems/potentials.hpp"
#include "torickems/quadrature.hpp"
#include "torickems/report.hpp"
#include "torickems/selftest.hpp"
