#pragma once

#include "sforge/differentials.hpp"
#include "sforge/error.hpp"
#include "sforge/graph.hpp"
#include "sforge/invariants.hpp"
#include "sforge/json_io.hpp"
#include "sforge/kz.hpp"
#include "sforge/linalg.hpp"
#include "sforge/moebius.hpp"
#include "sforge/monodromy.hpp"
#include "sforge/mzv.hpp"
#include "sforge/ncseries.hpp"
#include "sforge/parallel.hpp"
#include "sforge/params.hpp"
#include "sforge/periods.hpp"
#include "sforge/rational.hpp"
#include "sforge/restriction.hpp"
#include "sforge/ring.hpp"
#include "sforge/schottky.hpp"
#include "sforge/series.hpp"
#include "sforge/words.hpp"
