#pragma once

#include "relu_dp/errors.hpp"
#include "relu_dp/network.hpp"
#include "relu_dp/builder.hpp"
#include "relu_dp/gadgets.hpp"
#include "relu_dp/knapsack.hpp"
#include "relu_dp/dp_nn.hpp"
#include "relu_dp/fptas_nn.hpp"
#include "relu_dp/co_problems.hpp"
#include "relu_dp/co_oracles.hpp"
#include "relu_dp/instance_gen.hpp"
#include "relu_dp/io.hpp"
#include "relu_dp/verify.hpp"
