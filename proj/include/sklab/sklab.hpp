#pragma once

#include "sklab/catalog.hpp"
#include "sklab/classification.hpp"
#include "sklab/convergence.hpp"
#include "sklab/error.hpp"
#include "sklab/field.hpp"
#include "sklab/grid.hpp"
#include "sklab/harmonic.hpp"
#include "sklab/io.hpp"
#include "sklab/kw_solver.hpp"
#include "sklab/operators.hpp"
#include "sklab/singularity.hpp"
#include "sklab/sk_verify.hpp"
