#pragma once

#include "fdhom/cvm.hpp"
#include "fdhom/hilbert.hpp"
#include "fdhom/ingest.hpp"
#include "fdhom/parallel.hpp"
#include "fdhom/projection.hpp"
#include "fdhom/resampling.hpp"
#include "fdhom/rng.hpp"
#include "fdhom/simulate.hpp"
#include "fdhom/version.hpp"
