#pragma once

#include "bgs/assumptions.hpp"
#include "bgs/bounds.hpp"
#include "bgs/drivers.hpp"
#include "bgs/generators.hpp"
#include "bgs/gs_kernels.hpp"
#include "bgs/harness.hpp"
#include "bgs/local_qr.hpp"
#include "bgs/matrix.hpp"
#include "bgs/matrix_market.hpp"
#include "bgs/norms.hpp"
