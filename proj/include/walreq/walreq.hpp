//------------------------------------------------------------------------------
//
//   Copyright 2026 The walreq authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#pragma once

#include "walreq/algos.hpp"
#include "walreq/errors.hpp"
#include "walreq/instances.hpp"
#include "walreq/lp.hpp"
#include "walreq/market.hpp"
#include "walreq/pricing.hpp"
#include "walreq/rational.hpp"
#include "walreq/welfare.hpp"
