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

#include "trinity/service/state_machine.hpp"

#include "trinity/error.hpp"

namespace trinity::service {

using S = ExperimentState;
using E = Event;

const std::vector<ExperimentState>& AllStates() {
  static const std::vector<ExperimentState> all = {S::kDraft,    S::kDataPrepRunning,
                                                   S::kDataReady, S::kTraining,
                                                   S::kTrained,  S::kFailed};
  return all;
}

const std::vector<Event>& AllEvents() {
  static const std::vector<Event> all = {E::kStartDataprep,    E::kDataprepSucceeded,
                                         E::kDataprepFailed,   E::kStartTraining,
                                         E::kTrainingSucceeded, E::kTrainingFailed,
                                         E::kReset};
  return all;
}

const char* StateName(ExperimentState s) {
  switch (s) {
    case S::kDraft: return "DRAFT";
    case S::kDataPrepRunning: return "DATA_PREP_RUNNING";
    case S::kDataReady: return "DATA_READY";
    case S::kTraining: return "TRAINING";
    case S::kTrained: return "TRAINED";
    case S::kFailed: return "FAILED";
  }
  return "?";
}

const char* EventName(Event e) {
  switch (e) {
    case E::kStartDataprep: return "start_dataprep";
    case E::kDataprepSucceeded: return "dataprep_succeeded";
    case E::kDataprepFailed: return "dataprep_failed";
    case E::kStartTraining: return "start_training";
    case E::kTrainingSucceeded: return "training_succeeded";
    case E::kTrainingFailed: return "training_failed";
    case E::kReset: return "reset";
  }
  return "?";
}

ExperimentState ParseState(const std::string& s) {
  for (auto st : AllStates()) {
    if (s == StateName(st)) return st;
  }
  throw ValidationError("unknown experiment state '" + s + "'");
}

Event ParseEvent(const std::string& s) {
  for (auto e : AllEvents()) {
    if (s == EventName(e)) return e;
  }
  throw ValidationError("unknown event '" + s + "'");
}

std::optional<ExperimentState> NextState(ExperimentState from, Event event) {
  switch (from) {
    case S::kDraft:
      if (event == E::kStartDataprep) return S::kDataPrepRunning;
      break;
    case S::kDataPrepRunning:
      if (event == E::kDataprepSucceeded) return S::kDataReady;
      if (event == E::kDataprepFailed) return S::kFailed;
      break;
    case S::kDataReady:
      if (event == E::kStartTraining) return S::kTraining;
      break;
    case S::kTraining:
      if (event == E::kTrainingSucceeded) return S::kTrained;
      if (event == E::kTrainingFailed) return S::kFailed;
      break;
    case S::kTrained:
      if (event == E::kStartTraining) return S::kTraining;
      break;
    case S::kFailed:
      if (event == E::kReset) return S::kDraft;
      break;
  }
  return std::nullopt;
}

ExperimentState ApplyEvent(ExperimentState from, Event event) {
  if (auto to = NextState(from, event)) return *to;
  throw StateError(std::string("event '") + EventName(event) + "' is not allowed in state " +
                   StateName(from));
}

}  // namespace trinity::service
