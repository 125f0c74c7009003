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

#include "edna/runtime/control.hpp"

namespace edna::runtime {

StreamRecord make_end_of_stream(std::string_view producer_job, std::string_view run_id) {
  StreamRecord r;
  r.source_id = std::string(producer_job);
  r.schema_tag = std::string(kEndOfStreamTag);
  r.event_time = from_millis(0);
  r.payload = std::string(run_id);
  return r;
}

bool is_end_of_stream(const StreamRecord& record) noexcept {
  return record.schema_tag == kEndOfStreamTag;
}

}  // namespace edna::runtime
