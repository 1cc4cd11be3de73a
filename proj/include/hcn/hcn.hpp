// SPDX-License-Identifier: Apache-2.0
//
// hcn -- coverage and rate analysis for multi-antenna cellular downlinks with
// residual transceiver hardware impairments, pilot contamination and channel
// aging over Poisson-distributed base stations.
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "hcn/math/bessel.hpp"
#include "hcn/math/combinatorics.hpp"
#include "hcn/math/jets.hpp"
#include "hcn/math/quadrature.hpp"
#include "hcn/math/sampling.hpp"
#include "hcn/math/special.hpp"

#include "hcn/analytic.hpp"
#include "hcn/channel.hpp"
#include "hcn/simulator.hpp"
