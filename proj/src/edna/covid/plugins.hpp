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

#include <string_view>

#include "edna/runtime/registry.hpp"

namespace edna::covid {

// Cache keys the keyword jobs publish under: <prefix><source>.
inline constexpr std::string_view kMisinformationKeyPrefix = "keywords/misinformation/";
// Schema tags of keyword-source records.
inline constexpr std::string_view kArticleTag = "article";
inline constexpr std::string_view kKeywordListTag = "keyword-list";

// Ingest: synthetic-generator, keyword-source.
// Map: sentiment. Flatmap: extract-metadata, misinformation-tag,
// extract-misinformation. Emit: keyword-cache, tweet-store.
void register_covid_plugins(runtime::PluginRegistry& registry);

}  // namespace edna::covid
