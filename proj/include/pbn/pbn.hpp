#pragma once

#include "pbn/core_prob.hpp"
#include "pbn/doc_cluster.hpp"
#include "pbn/errors.hpp"
#include "pbn/io.hpp"
#include "pbn/markov.hpp"
#include "pbn/matrix_exp.hpp"
#include "pbn/processes.hpp"
#include "pbn/report.hpp"
#include "pbn/wick.hpp"
