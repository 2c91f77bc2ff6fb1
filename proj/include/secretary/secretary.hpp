#pragma once

#include "secretary/analysis.hpp"
#include "secretary/b_table.hpp"
#include "secretary/dual.hpp"
#include "secretary/primal.hpp"
#include "secretary/problem.hpp"
#include "secretary/protocol.hpp"
#include "secretary/simulate.hpp"
#include "secretary/util.hpp"
#include "secretary/verify.hpp"
