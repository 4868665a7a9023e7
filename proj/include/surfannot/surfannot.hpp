// Copyright 2026 The surfannot Authors.
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

#include "surfannot/analysis.hpp"
#include "surfannot/annotation.hpp"
#include "surfannot/distance.hpp"
#include "surfannot/marker_csv.hpp"
#include "surfannot/mesh.hpp"
#include "surfannot/pick.hpp"
#include "surfannot/ply.hpp"
#include "surfannot/series.hpp"
#include "surfannot/view.hpp"
