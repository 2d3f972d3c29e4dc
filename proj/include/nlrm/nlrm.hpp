#pragma once

// Nonnegative low-rank matrix approximation by tangent-space and plain
// alternating projections, with NMF baselines and benchmark tooling.

#include "nlrm/bench.hpp"
#include "nlrm/datagen.hpp"
#include "nlrm/dense_matrix.hpp"
#include "nlrm/diagnostics.hpp"
#include "nlrm/errors.hpp"
#include "nlrm/instrumentation.hpp"
#include "nlrm/linalg.hpp"
#include "nlrm/matrix_io.hpp"
#include "nlrm/nmf.hpp"
#include "nlrm/projections.hpp"
#include "nlrm/random.hpp"
#include "nlrm/result_json.hpp"
#include "nlrm/solver_types.hpp"
#include "nlrm/solvers.hpp"
#include "nlrm/unmixing.hpp"
