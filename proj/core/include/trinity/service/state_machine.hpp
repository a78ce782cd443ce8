/* Copyright 2026 The Trinity-Lite Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace trinity::service {

enum class ExperimentState { kDraft, kDataPrepRunning, kDataReady, kTraining, kTrained, kFailed };

enum class Event {
  kStartDataprep,
  kDataprepSucceeded,
  kDataprepFailed,
  kStartTraining,
  kTrainingSucceeded,
  kTrainingFailed,
  kReset,
};

const std::vector<ExperimentState>& AllStates();
const std::vector<Event>& AllEvents();

const char* StateName(ExperimentState s);  // "DRAFT", "DATA_PREP_RUNNING", ...
const char* EventName(Event e);            // "start_dataprep", ...
ExperimentState ParseState(const std::string& s);
Event ParseEvent(const std::string& s);

// Target state, or nullopt when the event is illegal in `from`.
std::optional<ExperimentState> NextState(ExperimentState from, Event event);

// NextState or StateError naming the current state and the event.
ExperimentState ApplyEvent(ExperimentState from, Event event);

}  // namespace trinity::service
