#ifndef CAUSALHIER_CAUSALHIER_HPP
#define CAUSALHIER_CAUSALHIER_HPP

// Exact-arithmetic toolkit for finite binary structural causal models:
// evaluation under interventions, the observational / interventional /
// counterfactual hierarchy, response-type canonical forms, feasibility and
// Y-goodness checks, Level-2-preserving separation pairs, LP bounds on
// counterfactual queries, and statistical verifiability simulation.

#include "causalhier/bounds.hpp"
#include "causalhier/causation.hpp"
#include "causalhier/hierarchy.hpp"
#include "causalhier/json_io.hpp"
#include "causalhier/lp.hpp"
#include "causalhier/rational.hpp"
#include "causalhier/scm.hpp"
#include "causalhier/separation.hpp"
#include "causalhier/standard_form.hpp"
#include "causalhier/verify.hpp"

#endif
