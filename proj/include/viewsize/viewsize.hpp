#pragma once

#include "viewsize/ingest.hpp"
#include "viewsize/hashing.hpp"
#include "viewsize/sketches.hpp"
#include "viewsize/multifractal.hpp"
#include "viewsize/bounds.hpp"
#include "viewsize/harness.hpp"
