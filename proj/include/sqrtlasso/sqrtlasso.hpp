#pragma once

#include "sqrtlasso/certify.hpp"
#include "sqrtlasso/core.hpp"
#include "sqrtlasso/csv.hpp"
#include "sqrtlasso/diagnostics.hpp"
#include "sqrtlasso/io.hpp"
#include "sqrtlasso/penalty.hpp"
#include "sqrtlasso/postsel.hpp"
#include "sqrtlasso/prob.hpp"
#include "sqrtlasso/rng.hpp"
#include "sqrtlasso/simulate.hpp"
#include "sqrtlasso/solvers.hpp"
