// Copyright 2026 The SpinEnt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "spinent/basis.hpp"
#include "spinent/bits.hpp"
#include "spinent/eigensolver.hpp"
#include "spinent/entanglement.hpp"
#include "spinent/errors.hpp"
#include "spinent/io.hpp"
#include "spinent/model.hpp"
#include "spinent/sweep.hpp"
