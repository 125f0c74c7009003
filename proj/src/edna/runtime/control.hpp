/*
 * Copyright 2026 The EDNA Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>
#include <string_view>

#include "edna/core/record.hpp"

namespace edna::runtime {

// Schema tag of the end-of-stream marker a finished job appends to its
// output topic. source_id names the producing job, the payload the run it
// belongs to (may be empty).
inline constexpr std::string_view kEndOfStreamTag = "edna.eos";

StreamRecord make_end_of_stream(std::string_view producer_job, std::string_view run_id = {});
bool is_end_of_stream(const StreamRecord& record) noexcept;

}  // namespace edna::runtime
