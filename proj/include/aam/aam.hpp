#ifndef AAM_AAM_HPP
#define AAM_AAM_HPP

// Umbrella header.

#include "aam/altcyc.hpp"
#include "aam/chemio/reaction_io.hpp"
#include "aam/errors.hpp"
#include "aam/ilp_model.hpp"
#include "aam/ilp_solver.hpp"
#include "aam/instance.hpp"
#include "aam/lp_format.hpp"
#include "aam/mapping.hpp"
#include "aam/molgraph.hpp"
#include "aam/netcomp.hpp"

#endif
