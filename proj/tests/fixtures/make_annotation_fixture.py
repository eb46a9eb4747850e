"""Generates the 200-item annotation fixture and its expected accepted count.

The expected count comes from explicit surface-form lists per keyword,
independent of the stemmer used by the library. Run from this directory:

    python3 make_annotation_fixture.py
"""

import json
import random
import re

KEYWORDS = ["walk", "run", "jog", "cross", "step", "stroll", "stride", "stand", "wait", "fall", "stumble"]

FORMS = {
    "walk": ["walk", "walks", "walked", "walking"],
    "run": ["run", "runs", "running"],
    "jog": ["jog", "jogs", "jogged", "jogging"],
    "cross": ["cross", "crosses", "crossed", "crossing"],
    "step": ["step", "steps", "stepped", "stepping"],
    "stroll": ["stroll", "strolls", "strolled", "strolling"],
    "stride": ["stride", "strides", "striding"],
    "stand": ["stand", "stands", "standing"],
    "wait": ["wait", "waits", "waited", "waiting"],
    "fall": ["fall", "falls", "falling"],
    "stumble": ["stumble", "stumbles", "stumbled", "stumbling"],
}

# Words that look related but must not match any keyword.
DISTRACTORS = ["ran", "fell", "stood", "crosswalk", "walker", "runner", "sidewalk", "waiter", "fallen",
               "standstill", "stepladder", "jogger"]
OTHER_VERBS = ["dances", "waves", "jumps", "sits", "throws", "kicks", "turns", "looks", "claps", "spins"]
SUBJECTS = ["a person", "someone", "a man", "a woman", "the pedestrian", "a child"]
TAILS = ["slowly", "quickly", "near the road", "on the sidewalk", "in place", "toward the curb", "forward",
         "then stops", "and looks around", "across the street"]


def oracle_accepts(text):
    tokens = [t for t in re.split(r"[^0-9a-z]+", text.lower()) if t]
    forms = {f for fs in FORMS.values() for f in fs}
    return any(t in forms for t in tokens)


def main():
    rng = random.Random(20241018)
    items = []
    for i in range(200):
        subject = rng.choice(SUBJECTS)
        roll = rng.random()
        if roll < 0.45:
            verb = rng.choice(FORMS[rng.choice(KEYWORDS)])
        elif roll < 0.7:
            verb = rng.choice(DISTRACTORS)
        else:
            verb = rng.choice(OTHER_VERBS)
        text = f"{subject} {verb} {rng.choice(TAILS)}"
        if rng.random() < 0.2:
            text = text.upper() if rng.random() < 0.5 else text.capitalize() + "."
        items.append({"id": f"ann_{i:03d}", "annotation": text})

    with open("annotations_200.ndjson", "w") as f:
        for item in items:
            f.write(json.dumps(item, separators=(",", ":")) + "\n")
    accepted = sum(oracle_accepts(item["annotation"]) for item in items)
    with open("annotations_200.expected.json", "w") as f:
        json.dump({"keywords": KEYWORDS, "accepted": accepted, "total": len(items)}, f, indent=2)
        f.write("\n")
    print(accepted)


if __name__ == "__main__":
    main()
