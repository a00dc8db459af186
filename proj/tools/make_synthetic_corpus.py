#!/usr/bin/env python3
# Copyright 2026 The Keyprompt Authors.
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
"""Regenerates data/synthetic/articles.jsonl (20 small fake articles)."""

import json
import random
import sys

TOPICS = [
    ("asthma", ["airway", "inhaler", "bronchial", "wheeze", "spirometry"]),
    ("diabetes", ["insulin", "glucose", "glycemic", "pancreatic", "metformin"]),
    ("sepsis", ["infection", "lactate", "antibiotic", "bacteremia", "shock"]),
    ("stroke", ["ischemic", "thrombolysis", "cerebral", "infarct", "aphasia"]),
    ("malaria", ["parasite", "plasmodium", "mosquito", "artemisinin", "fever"]),
]

SECTION_WORDS = {
    "Introduction": ["burden", "prevalence", "previous", "unclear", "aim", "gap"],
    "Methods": ["cohort", "recruited", "protocol", "regression", "measured", "randomized"],
    "Results": ["observed", "increased", "reduced", "significant", "ratio", "interval"],
    "Discussion": ["suggest", "limitation", "implication", "future", "consistent", "practice"],
}

HEADINGS = {
    "Introduction": ["Introduction", "1. Introduction", "Background"],
    "Methods": ["Methods", "2. Materials and Methods", "Methodology"],
    "Results": ["Results", "3. Results", "Findings"],
    "Discussion": ["Discussion", "4. Discussion", "Conclusions"],
}

FILLER = ["the", "of", "and", "in", "patients", "study", "with", "was", "were", "for"]


def sentence(rng, topic_words, section_words, n):
    pool = topic_words * 2 + section_words * 2 + FILLER * 3
    words = [rng.choice(pool) for _ in range(n)]
    return " ".join(words).capitalize() + "."


def paragraph(rng, topic_words, section_words, sentences):
    return " ".join(sentence(rng, topic_words, section_words, rng.randint(8, 16))
                    for _ in range(sentences))


def article(rng, idx, length_scale=1):
    topic, words = TOPICS[idx % len(TOPICS)]
    sections = []
    for kind, heading_choices in HEADINGS.items():
        sections.append({
            "heading": rng.choice(heading_choices),
            "text": paragraph(rng, words, SECTION_WORDS[kind], rng.randint(4, 7) * length_scale),
        })
    sections.append({"heading": "Acknowledgements", "text": "We thank the participants."})
    abstract = {kind.lower(): paragraph(rng, words, SECTION_WORDS[kind], 1)
                for kind in HEADINGS}
    return {
        "id": "syn-%03d" % (idx + 1),
        "title": "A synthetic %s study number %d" % (topic, idx + 1),
        "sections": sections,
        "abstract": abstract,
        "keywords": [topic, rng.choice(words), rng.choice(words).title()],
        "mesh_terms": [topic.title(), "Humans", rng.choice(["Adult", "Child", "Aged"])],
    }


def main():
    rng = random.Random(20260101)
    articles = [article(rng, i) for i in range(20)]
    articles[4]["keywords"] = []                       # MissingKeywords
    del articles[9]["abstract"]["results"]             # IncompleteAbstract
    articles[13]["sections"] = [s for s in articles[13]["sections"]
                                if not s["heading"].endswith(("Methods", "Methodology"))]
    articles[17] = article(random.Random(17), 17, length_scale=12)  # LengthOutlier
    out = sys.argv[1] if len(sys.argv) > 1 else "data/synthetic/articles.jsonl"
    with open(out, "w", encoding="utf-8") as f:
        for a in articles:
            f.write(json.dumps(a, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
