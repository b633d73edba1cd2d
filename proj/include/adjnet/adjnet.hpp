// adjnet.hpp - convenience header pulling in the whole library

#ifndef ADJNET_ADJNET_HPP
#define ADJNET_ADJNET_HPP

#include "adjnet/checksuite.hpp"
#include "adjnet/cli.hpp"
#include "adjnet/engine.hpp"
#include "adjnet/gradcheck.hpp"
#include "adjnet/io.hpp"
#include "adjnet/layer.hpp"
#include "adjnet/linalg.hpp"
#include "adjnet/network.hpp"
#include "adjnet/nonlinearity.hpp"

#endif  // ADJNET_ADJNET_HPP
