#pragma once

#include "copyloc/align.hpp"
#include "copyloc/annotation.hpp"
#include "copyloc/attention.hpp"
#include "copyloc/feature.hpp"
#include "copyloc/losses.hpp"
#include "copyloc/metrics.hpp"
#include "copyloc/pseudo.hpp"
#include "copyloc/similarity.hpp"
#include "copyloc/sim_matrix.hpp"
#include "copyloc/synthetic.hpp"
