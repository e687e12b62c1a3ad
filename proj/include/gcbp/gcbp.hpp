#pragma once

#include "gcbp/aptas.hpp"
#include "gcbp/bench.hpp"
#include "gcbp/classify.hpp"
#include "gcbp/core.hpp"
#include "gcbp/error.hpp"
#include "gcbp/exact_poly.hpp"
#include "gcbp/generate.hpp"
#include "gcbp/io.hpp"
#include "gcbp/lp.hpp"
#include "gcbp/matching.hpp"
#include "gcbp/milp.hpp"
#include "gcbp/oracle.hpp"
#include "gcbp/rational.hpp"
#include "gcbp/solve.hpp"
#include "gcbp/stage1.hpp"
#include "gcbp/stage2.hpp"
