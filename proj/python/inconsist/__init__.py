# Copyright 2026 The Inconsist Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Detect inconsistent natural-language explanations of NLI models."""

from ._inconsist import (
    InconsistError,
    Oracle,
    TemplateSet,
    attack,
    generate,
    instantiate,
    match,
    negation_variants,
    normalize,
    read_report,
    report_summary,
    summarize_counts,
    swap_variants,
    synthetic_suite,
)

__all__ = [
    "InconsistError",
    "Oracle",
    "TemplateSet",
    "attack",
    "generate",
    "instantiate",
    "match",
    "negation_variants",
    "normalize",
    "read_report",
    "report_summary",
    "summarize_counts",
    "swap_variants",
    "synthetic_suite",
]
