#pragma once

#include "riskpar/bench.hpp"
#include "riskpar/ccd.hpp"
#include "riskpar/core.hpp"
#include "riskpar/io.hpp"
#include "riskpar/jacobi.hpp"
#include "riskpar/matrix_lab.hpp"
#include "riskpar/newton.hpp"
#include "riskpar/solve.hpp"
