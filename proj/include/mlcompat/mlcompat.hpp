// Copyright 2026 The mlcompat Authors
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

#include "mlcompat/bench.hpp"
#include "mlcompat/error.hpp"
#include "mlcompat/file_io.hpp"
#include "mlcompat/image_io.hpp"
#include "mlcompat/image_tools.hpp"
#include "mlcompat/lexer.hpp"
#include "mlcompat/math_tools.hpp"
#include "mlcompat/matrix.hpp"
#include "mlcompat/pipeline.hpp"
#include "mlcompat/random.hpp"
#include "mlcompat/registry.hpp"
#include "mlcompat/string_tools.hpp"
#include "mlcompat/synthetic.hpp"
#include "mlcompat/translit.hpp"
