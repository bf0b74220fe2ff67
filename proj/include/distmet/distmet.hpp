// Copyright 2026 The distmet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "distmet/bounds.hpp"
#include "distmet/campaign.hpp"
#include "distmet/csv.hpp"
#include "distmet/error.hpp"
#include "distmet/fock.hpp"
#include "distmet/nelder_mead.hpp"
#include "distmet/network.hpp"
#include "distmet/optimizer.hpp"
#include "distmet/parallel.hpp"
#include "distmet/protocols.hpp"
#include "distmet/qfi.hpp"
#include "distmet/random.hpp"
#include "distmet/weights.hpp"
