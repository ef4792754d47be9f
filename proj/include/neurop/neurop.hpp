#pragma once

#include "neurop/automaton.hpp"
#include "neurop/domain.hpp"
#include "neurop/error.hpp"
#include "neurop/exam_io.hpp"
#include "neurop/facts.hpp"
#include "neurop/fsm.hpp"
#include "neurop/interpret.hpp"
#include "neurop/knowledge_base.hpp"
#include "neurop/level2_oracle.hpp"
#include "neurop/pipeline.hpp"
#include "neurop/report.hpp"
#include "neurop/rules.hpp"
#include "neurop/segment_diagnosis.hpp"
#include "neurop/synthesis.hpp"
