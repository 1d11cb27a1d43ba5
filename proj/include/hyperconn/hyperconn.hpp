#pragma once

#include "hyperconn/error.hpp"
#include "hyperconn/numeric.hpp"
#include "hyperconn/model.hpp"
#include "hyperconn/rng.hpp"
#include "hyperconn/sampling.hpp"
#include "hyperconn/structure.hpp"
#include "hyperconn/theory.hpp"
#include "hyperconn/io.hpp"
#include "hyperconn/harness.hpp"
