// Copyright 2026 The privkf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

// Command-line entry point: run1, run2, attack, bench, gen.
//
// Exit status: 0 on success, 1 for bad arguments or input, 2 for numerical
// or protocol failures. Diagnostics go to standard error.

namespace privkf {

int run_cli(int argc, const char* const* argv);

}  // namespace privkf
