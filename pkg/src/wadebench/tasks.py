"""The ten synthetic sequence tasks, with vocabularies, masks, and encodings.

Every task emits token sequences paired with a boolean prediction mask that
marks the positions where supervision (and accuracy) applies.  Tasks 1-2 are
binary periodic patterns, 3-4 symbolic counting with a query marker, 5-10
generated-language question answering of increasing structure.  Generation is
a pure function of (task spec, seed, count).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, FormatError, VocabularyError

NAME_POOL = [
    "JOHN", "JAMES", "PAUL", "TOM", "GEORGE", "MARY", "ANNA",
    "PETER", "LISA", "SARAH", "DAVID", "EMMA", "HENRY",
]
VERB_POOL = ["HEAR", "SEE", "SMELL", "TOUCH", "FEEL", "TASTE", "SENSE"]
OBJECT_POOL = ["APPLE", "BANANA", "ORANGE", "PEAR", "MELON", "LEMON", "CHERRY", "GRAPE"]
COLOR_POOL = ["RED", "GREEN", "BLUE", "YELLOW"]
SIZE_POOL = ["SMALL", "LARGE", "TINY", "HUGE", "MEDIUM"]
NUMBER_WORDS = [
    "ZERO", "ONE", "TWO", "THREE", "FOUR", "FIVE", "SIX", "SEVEN",
    "EIGHT", "NINE", "TEN", "ELEVEN", "TWELVE", "THIRTEEN",
]

QUERY_MARKER = "x"   # starts the query section of the counting tasks
SEPARATOR = "y"      # delimits patterns in task 4

TASK_NAMES = {
    1: "periodic",
    2: "incremental-periodic",
    3: "symbol-counting",
    4: "pattern-counting",
    5: "basic-qa",
    6: "harder-qa",
    7: "world-qa",
    8: "world-qa-counting",
    9: "adjective-qa",
    10: "adjective-qa-counting",
}

DEFAULT_PARAMS = {
    1: {"min_pattern": 1, "max_pattern": 10, "min_length": 30, "max_length": 60},
    2: {"min_pattern": 1, "max_pattern": 10, "min_length": 30, "max_length": 60},
    3: {"symbols": 3, "min_prompt": 1, "max_prompt": 10, "min_queries": 1, "max_queries": 3},
    4: {"symbols": 3, "min_prompt": 1, "max_prompt": 45, "min_pattern": 1, "max_pattern": 3},
    5: {"names": 5, "verbs": 2, "min_names": 1, "max_names": 5},
    6: {"names": 11, "verbs": 5, "min_names": 1, "max_names": 5},
    7: {"names": 13, "verbs": 7, "min_names": 1, "max_names": 5,
        "min_statements": 1, "max_statements": 6, "max_questions": 8},
    8: {"names": 13, "verbs": 7, "min_names": 1, "max_names": 5,
        "min_statements": 1, "max_statements": 6, "max_questions": 8},
    9: {"objects": 8, "verbs": 6, "colors": 4, "sizes": 5,
        "min_statements": 1, "max_statements": 6, "max_questions": 8},
    10: {"objects": 8, "verbs": 6, "colors": 4, "sizes": 5,
         "min_statements": 1, "max_statements": 6, "max_questions": 8},
}


class Vocabulary:
    """Bijection between token surface forms and dense ids 0..L-1."""

    def __init__(self, tokens):
        tokens = tuple(tokens)
        if len(set(tokens)) != len(tokens):
            raise ConfigError("vocabulary tokens must be unique")
        self._tokens = tokens
        self._ids = {t: i for i, t in enumerate(tokens)}

    @property
    def size(self) -> int:
        return len(self._tokens)

    @property
    def tokens(self) -> tuple[str, ...]:
        return self._tokens

    def id(self, token: str) -> int:
        try:
            return self._ids[token]
        except KeyError:
            raise VocabularyError(f"unknown token {token!r}") from None

    def token(self, token_id: int) -> str:
        if not 0 <= token_id < len(self._tokens):
            raise VocabularyError(f"token id {token_id} outside 0..{len(self._tokens) - 1}")
        return self._tokens[token_id]

    def encode(self, surfaces) -> tuple[int, ...]:
        return tuple(self.id(t) for t in surfaces)

    def decode(self, ids) -> tuple[str, ...]:
        return tuple(self.token(i) for i in ids)

    def __len__(self) -> int:
        return len(self._tokens)

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self._tokens == other._tokens

    def __repr__(self) -> str:
        return f"Vocabulary({len(self._tokens)} tokens)"


@dataclass(frozen=True)
class TaskSample:
    """One token sequence with its prediction mask."""

    tokens: tuple[int, ...]
    mask: tuple[bool, ...]

    def __post_init__(self):
        if len(self.tokens) != len(self.mask):
            raise FormatError("tokens and mask lengths differ")
        if len(self.tokens) < 2:
            raise FormatError("samples must have at least two tokens")
        if not any(self.mask):
            raise FormatError("at least one position must be masked")
        if self.mask[0]:
            raise FormatError("position 0 cannot be masked")


@dataclass(frozen=True)
class TaskSpec:
    """A task id plus its generation parameters (defaults from the benchmark)."""

    task_id: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.task_id not in DEFAULT_PARAMS:
            raise ConfigError(f"task id must be 1..10, got {self.task_id}")
        merged = dict(DEFAULT_PARAMS[self.task_id])
        unknown = set(self.params) - set(merged)
        if unknown:
            raise ConfigError(f"unknown parameters for task {self.task_id}: {sorted(unknown)}")
        merged.update(self.params)
        object.__setattr__(self, "params", merged)
        _validate_params(self.task_id, merged)

    @property
    def name(self) -> str:
        return TASK_NAMES[self.task_id]


def _validate_params(task_id: int, p: dict):
    def positive(key):
        if p[key] < 1:
            raise ConfigError(f"task {task_id}: {key} must be >= 1, got {p[key]}")

    def ordered(lo, hi):
        if not 1 <= p[lo] <= p[hi]:
            raise ConfigError(f"task {task_id}: need 1 <= {lo} <= {hi}")

    if task_id in (1, 2):
        ordered("min_pattern", "max_pattern")
        ordered("min_length", "max_length")
    elif task_id == 3:
        positive("symbols")
        if p["symbols"] > 3:
            raise ConfigError("task 3 supports at most the 3 symbols A, B, C")
        ordered("min_prompt", "max_prompt")
        ordered("min_queries", "max_queries")
        if p["max_queries"] > p["symbols"]:
            raise ConfigError("task 3: max_queries cannot exceed the symbol count")
    elif task_id == 4:
        positive("symbols")
        if p["symbols"] > 3:
            raise ConfigError("task 4 supports at most the 3 symbols A, B, C")
        ordered("min_prompt", "max_prompt")
        ordered("min_pattern", "max_pattern")
    elif task_id in (5, 6, 7, 8):
        positive("names")
        positive("verbs")
        if p["names"] > len(NAME_POOL) or p["verbs"] > len(VERB_POOL):
            raise ConfigError(f"task {task_id}: name/verb pools exhausted")
        ordered("min_names", "max_names")
        if p["max_names"] > p["names"]:
            raise ConfigError(f"task {task_id}: max_names cannot exceed the name count")
        if task_id in (7, 8):
            ordered("min_statements", "max_statements")
            positive("max_questions")
    else:
        for key in ("objects", "verbs", "colors", "sizes"):
            positive(key)
        if (p["objects"] > len(OBJECT_POOL) or p["verbs"] > len(VERB_POOL)
                or p["colors"] > len(COLOR_POOL) or p["sizes"] > len(SIZE_POOL)):
            raise ConfigError(f"task {task_id}: word pools exhausted")
        ordered("min_statements", "max_statements")
        positive("max_questions")


# ---------------------------------------------------------------------------
# Vocabularies and answer sub-vocabularies
# ---------------------------------------------------------------------------

def _symbol_set(p):
    return ["A", "B", "C"][: p["symbols"]]


def _max_pattern_count(p) -> int:
    # m unit patterns with m-1 separators fit in max_prompt symbols
    return (p["max_prompt"] + 1) // (p["min_pattern"] + 1)


def vocabulary_for(spec: TaskSpec) -> Vocabulary:
    """The fixed vocabulary of every token the task can emit."""
    p = spec.params
    t = spec.task_id
    if t in (1, 2):
        return Vocabulary(["0", "1"])
    if t == 3:
        counts = [str(c) for c in range(p["max_prompt"] + 1)]
        return Vocabulary(_symbol_set(p) + [QUERY_MARKER] + counts)
    if t == 4:
        counts = [str(c) for c in range(1, _max_pattern_count(p) + 1)]
        return Vocabulary(_symbol_set(p) + [QUERY_MARKER, SEPARATOR] + counts)
    if t in (5, 6, 7):
        base = NAME_POOL[: p["names"]] + VERB_POOL[: p["verbs"]]
        return Vocabulary(base + ["I", "DO", "NOT", "AND", "BUT", "?", ".", "YES", "NO"])
    if t == 8:
        base = NAME_POOL[: p["names"]] + VERB_POOL[: p["verbs"]]
        extra = ["I", "DO", "NOT", "AND", "BUT", "?", ".", "YES", "NO",
                 "HOW", "MANY", "THINGS"]
        return Vocabulary(base + extra + NUMBER_WORDS[: p["names"] + 1])
    base = (OBJECT_POOL[: p["objects"]] + VERB_POOL[: p["verbs"]]
            + COLOR_POOL[: p["colors"]] + SIZE_POOL[: p["sizes"]])
    extra = ["I", "DO", "NOT", "BUT", "?", ".", "YES", "NO",
             "A", "WHAT", "IS", "THE", "COLOR", "SIZE", "OF"]
    if t == 9:
        return Vocabulary(base + extra)
    return Vocabulary(base + extra + ["HOW", "MANY", "THINGS"]
                      + NUMBER_WORDS[: p["objects"] + 1])


def answer_tokens(spec: TaskSpec) -> frozenset[str]:
    """Surface forms that may appear at masked positions."""
    p = spec.params
    t = spec.task_id
    if t in (1, 2):
        return frozenset(["0", "1"])
    if t == 3:
        return frozenset(str(c) for c in range(p["max_prompt"] + 1))
    if t == 4:
        return frozenset(str(c) for c in range(1, _max_pattern_count(p) + 1))
    if t in (5, 6, 7):
        return frozenset(["YES", "NO"])
    if t == 8:
        return frozenset(["YES", "NO"] + NUMBER_WORDS[: p["names"] + 1])
    attrs = COLOR_POOL[: p["colors"]] + SIZE_POOL[: p["sizes"]]
    if t == 9:
        return frozenset(["YES", "NO"] + attrs)
    return frozenset(["YES", "NO"] + attrs + NUMBER_WORDS[: p["objects"] + 1])


# ---------------------------------------------------------------------------
# Seeded sampling helpers (python lists in, python scalars out)
# ---------------------------------------------------------------------------

def _pick(rng, seq):
    return seq[int(rng.integers(len(seq)))]


def _sample(rng, seq, k):
    idx = rng.permutation(len(seq))[:k]
    return [seq[int(i)] for i in idx]


def _coin(rng) -> bool:
    return bool(rng.integers(2))


def _join_and(names):
    out = []
    for i, n in enumerate(names):
        if i:
            out.append("AND")
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Generators (one per task) -- each returns a list of surface tokens
# ---------------------------------------------------------------------------

def _draw_pattern(rng, p):
    # one pattern per dataset: the task is to learn this pattern on the fly,
    # and every sample repeats it (at a sample-specific length); redraw until
    # the pattern's true period equals its drawn size
    n = int(rng.integers(p["min_pattern"], p["max_pattern"] + 1))
    while True:
        pattern = ["01"[int(b)] for b in rng.integers(0, 2, size=n)]
        if minimal_period(pattern) == n:
            return pattern


def _gen_periodic(rng, p, pattern):
    target = int(rng.integers(p["min_length"], p["max_length"] + 1))
    reps = max(2, round(target / len(pattern)))
    return pattern * reps


def _gen_incremental_periodic(rng, p, pattern):
    target = int(rng.integers(p["min_length"], p["max_length"] + 1))
    tokens: list[str] = []
    k = 0
    while k < 2 or len(tokens) < target:
        k += 1
        for sym in pattern:
            tokens.extend([sym] * k)
    return tokens


def _gen_symbol_counting(rng, p):
    symbols = _symbol_set(p)
    m = int(rng.integers(p["min_prompt"], p["max_prompt"] + 1))
    prompt = [_pick(rng, symbols) for _ in range(m)]
    q = int(rng.integers(p["min_queries"], p["max_queries"] + 1))
    queried = _sample(rng, symbols, q)
    tokens = prompt + [QUERY_MARKER]
    for sym in queried:
        tokens += [sym, str(prompt.count(sym))]
    return tokens


def _gen_pattern_counting(rng, p):
    symbols = _symbol_set(p)
    budget = int(rng.integers(p["min_prompt"], p["max_prompt"] + 1))
    patterns: list[tuple[str, ...]] = []
    used = 0
    while True:
        plen = int(rng.integers(p["min_pattern"], p["max_pattern"] + 1))
        if not patterns:
            plen = min(plen, budget)
        cost = plen + (1 if patterns else 0)
        if used + cost > budget:
            break
        patterns.append(tuple(_pick(rng, symbols) for _ in range(plen)))
        used += cost
    distinct = list(dict.fromkeys(patterns))
    n_queries = int(rng.integers(1, len(distinct) + 1))
    queried = _sample(rng, distinct, n_queries)
    tokens: list[str] = []
    for i, pat in enumerate(patterns):
        if i:
            tokens.append(SEPARATOR)
        tokens.extend(pat)
    tokens.append(QUERY_MARKER)
    for pat in queried:
        tokens.extend(pat)
        tokens += [SEPARATOR, str(patterns.count(pat))]
    return tokens


def _statement_tokens(verb, positives, negatives, neg_verb=None):
    tokens: list[str] = []
    if positives:
        tokens += ["I", verb] + _join_and(positives)
        if negatives:
            tokens += ["BUT", "I", "DO", "NOT", neg_verb or verb] + _join_and(negatives)
    else:
        tokens += ["I", "DO", "NOT", neg_verb or verb] + _join_and(negatives)
    tokens.append(".")
    return tokens


def _gen_simple_qa(rng, p):
    names = NAME_POOL[: p["names"]]
    verbs = VERB_POOL[: p["verbs"]]
    verb = _pick(rng, verbs)
    k = int(rng.integers(p["min_names"], p["max_names"] + 1))
    subset = _sample(rng, names, k)
    answer_yes = _coin(rng)
    n_pos = int(rng.integers(1, k + 1)) if answer_yes else int(rng.integers(0, k))
    positives, negatives = subset[:n_pos], subset[n_pos:]
    asked = _pick(rng, positives if answer_yes else negatives)
    tokens = _statement_tokens(verb, positives, negatives)
    tokens += ["DO", "I", verb, asked, "?", "YES" if answer_yes else "NO"]
    return tokens


def _gen_world_qa(rng, p, counting):
    names = NAME_POOL[: p["names"]]
    verbs = VERB_POOL[: p["verbs"]]
    world: dict[tuple[str, str], bool] = {}
    tokens: list[str] = []
    n_stmt = int(rng.integers(p["min_statements"], p["max_statements"] + 1))
    for _ in range(n_stmt):
        verb = _pick(rng, verbs)
        k = int(rng.integers(p["min_names"], p["max_names"] + 1))
        unbound = [n for n in names if (verb, n) not in world]
        chosen = _sample(rng, unbound, min(k, len(unbound))) if unbound else _sample(rng, names, k)
        positives, negatives = [], []
        for name in chosen:
            key = (verb, name)
            if key not in world:
                world[key] = _coin(rng)
            (positives if world[key] else negatives).append(name)
        tokens += _statement_tokens(verb, positives, negatives)

    stated_verbs = list(dict.fromkeys(v for v, _ in world))
    yes_pool = [key for key, pol in world.items() if pol]
    no_pool = [key for key, pol in world.items() if not pol]
    n_q = int(rng.integers(1, p["max_questions"] + 1))
    for _ in range(n_q):
        if counting and _coin(rng):
            verb = _pick(rng, stated_verbs)
            count = sum(1 for (v, _), pol in world.items() if v == verb and pol)
            tokens += ["HOW", "MANY", "THINGS", "DO", "I", verb, "?", NUMBER_WORDS[count]]
            continue
        want_yes = _coin(rng)
        pool = yes_pool if want_yes else no_pool
        if not pool:
            want_yes = not want_yes
            pool = yes_pool if want_yes else no_pool
        verb, name = _pick(rng, pool)
        tokens += ["DO", "I", verb, name, "?", "YES" if want_yes else "NO"]
    return tokens


def _entails(query_attrs: dict, stated_attrs: dict) -> bool:
    return all(stated_attrs.get(cat) == val for cat, val in query_attrs.items())


def _gen_adjective_qa(rng, p, counting):
    objects = OBJECT_POOL[: p["objects"]]
    verbs = VERB_POOL[: p["verbs"]]
    colors = COLOR_POOL[: p["colors"]]
    sizes = SIZE_POOL[: p["sizes"]]

    instances: dict[tuple[str, str], dict] = {}   # positive (verb, obj) -> stated attrs
    negated: list[tuple[str, str, dict]] = []     # (verb, obj, attrs) stated absent
    mentioned_verbs: list[str] = []
    tokens: list[str] = []

    def attr_phrase(attrs):
        out = ["A"]
        if "SIZE" in attrs:
            out.append(attrs["SIZE"])
        if "COLOR" in attrs:
            out.append(attrs["COLOR"])
        return out

    def draw_attrs():
        attrs = {}
        if _coin(rng):
            attrs["SIZE"] = _pick(rng, sizes)
        if _coin(rng):
            attrs["COLOR"] = _pick(rng, colors)
        return attrs

    def consistent_attrs(key):
        # attrs for a new positive fact that violate no recorded negative
        blocking = [na for nv, no, na in negated if (nv, no) == key]
        for _ in range(30):
            attrs = draw_attrs()
            if not any(_entails(na, attrs) for na in blocking):
                return attrs
        return None

    n_stmt = int(rng.integers(p["min_statements"], p["max_statements"] + 1))
    for _ in range(n_stmt):
        verb = _pick(rng, verbs)
        unbound = [o for o in objects if (verb, o) not in instances]
        key = None
        for obj in _sample(rng, unbound, len(unbound)):
            attrs = consistent_attrs((verb, obj))
            if attrs is not None:
                key = (verb, obj)
                instances[key] = attrs
                break
        if key is None:
            # everything consistent is already stated: restate an existing fact
            key = _pick(rng, list(instances))
            verb = key[0]
        if verb not in mentioned_verbs:
            mentioned_verbs.append(verb)
        tokens += ["I", verb] + attr_phrase(instances[key]) + [key[1]]

        if _coin(rng):
            nverb = _pick(rng, verbs)
            nobj = _pick(rng, objects)
            stated = instances.get((nverb, nobj))
            nattrs = draw_attrs()
            for _ in range(20):
                if stated is None or not _entails(nattrs, stated):
                    break
                nattrs = draw_attrs()
            if stated is None or not _entails(nattrs, stated):
                negated.append((nverb, nobj, nattrs))
                if nverb not in mentioned_verbs:
                    mentioned_verbs.append(nverb)
                tokens += ["BUT", "I", "DO", "NOT", nverb] + attr_phrase(nattrs) + [nobj]
        tokens.append(".")

    def yes_question():
        (verb, obj), attrs = _pick(rng, list(instances.items()))
        asked = {cat: val for cat, val in attrs.items() if _coin(rng)}
        return ["DO", "I", verb] + attr_phrase(asked) + [obj, "?", "YES"]

    def no_question():
        options = []
        for (verb, obj), attrs in instances.items():
            for cat, pool in (("SIZE", sizes), ("COLOR", colors)):
                if cat in attrs:
                    for val in pool:
                        if val != attrs[cat]:
                            options.append((verb, obj, {cat: val}))
        for verb, obj, attrs in negated:
            options.append((verb, obj, attrs))
        if not options:
            return None
        verb, obj, attrs = _pick(rng, options)
        return ["DO", "I", verb] + attr_phrase(attrs) + [obj, "?", "NO"]

    def attribute_question():
        options = []
        for (verb, obj), attrs in instances.items():
            for cat in ("SIZE", "COLOR"):
                if cat in attrs:
                    options.append((verb, obj, cat, attrs[cat]))
        if not options:
            return None
        verb, obj, cat, val = _pick(rng, options)
        return ["WHAT", "IS", "THE", cat, "OF", "THE", obj, "I", verb, "?", val]

    def counting_question():
        verb = _pick(rng, mentioned_verbs)
        count = sum(1 for (v, _) in instances if v == verb)
        return ["HOW", "MANY", "THINGS", "DO", "I", verb, "?", NUMBER_WORDS[count]]

    n_q = int(rng.integers(1, p["max_questions"] + 1))
    for _ in range(n_q):
        kinds = ["yesno", "attribute"] + (["counting"] if counting else [])
        kind = _pick(rng, kinds)
        if kind == "counting":
            tokens += counting_question()
            continue
        if kind == "attribute":
            q = attribute_question()
            if q is not None:
                tokens += q
                continue
        q = yes_question() if _coin(rng) else no_question()
        if q is None:
            q = yes_question()
        tokens += q
    return tokens


_GENERATORS = {
    1: lambda rng, p, shared: _gen_periodic(rng, p, shared),
    2: lambda rng, p, shared: _gen_incremental_periodic(rng, p, shared),
    3: lambda rng, p, shared: _gen_symbol_counting(rng, p),
    4: lambda rng, p, shared: _gen_pattern_counting(rng, p),
    5: lambda rng, p, shared: _gen_simple_qa(rng, p),
    6: lambda rng, p, shared: _gen_simple_qa(rng, p),
    7: lambda rng, p, shared: _gen_world_qa(rng, p, counting=False),
    8: lambda rng, p, shared: _gen_world_qa(rng, p, counting=True),
    9: lambda rng, p, shared: _gen_adjective_qa(rng, p, counting=False),
    10: lambda rng, p, shared: _gen_adjective_qa(rng, p, counting=True),
}


# ---------------------------------------------------------------------------
# Masks
# ---------------------------------------------------------------------------

def minimal_period(tokens) -> int:
    """Smallest p such that tokens[i] == tokens[i mod p] for all i."""
    for p in range(1, len(tokens) + 1):
        if all(tokens[i] == tokens[i % p] for i in range(len(tokens))):
            return p
    return len(tokens)


def _incremental_base_length(tokens) -> int:
    """Length of the k=1 block of an incremental-periodic sequence."""
    # at least two blocks exist, so the base pattern fits in a third
    for n in range(1, len(tokens) // 3 + 1):
        pattern = tokens[:n]
        rebuilt: list = []
        k = 0
        while len(rebuilt) < len(tokens):
            k += 1
            for sym in pattern:
                rebuilt.extend([sym] * k)
        if len(rebuilt) == len(tokens) and all(a == b for a, b in zip(rebuilt, tokens)):
            return n
    raise FormatError("sequence is not an incremental-periodic expansion")


def derive_mask(task_id: int, tokens) -> list[bool]:
    """Recompute the prediction mask from the surface tokens alone.

    Tasks 1-2 mask everything from the start of the second period (second
    expansion block for task 2) onward; tasks 3-10 mask exactly the answer
    tokens, found right after their structural markers.
    """
    tokens = list(tokens)
    mask = [False] * len(tokens)
    if task_id == 1:
        start = minimal_period(tokens)
        for i in range(start, len(tokens)):
            mask[i] = True
    elif task_id == 2:
        start = _incremental_base_length(tokens)
        for i in range(start, len(tokens)):
            mask[i] = True
    elif task_id == 3:
        qi = tokens.index(QUERY_MARKER)
        for i in range(qi + 2, len(tokens), 2):
            mask[i] = True
    elif task_id == 4:
        start = tokens.index(QUERY_MARKER) + 1
        for i in range(start, len(tokens)):
            if tokens[i] == SEPARATOR and i + 1 < len(tokens):
                mask[i + 1] = True
    else:
        for i, tok in enumerate(tokens):
            if tok == "?" and i + 1 < len(tokens):
                mask[i + 1] = True
    return mask


# ---------------------------------------------------------------------------
# Datasets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Dataset:
    """Generated samples plus vocabulary and (after split) train/test indices."""

    samples: tuple[TaskSample, ...]
    vocabulary: Vocabulary
    spec: TaskSpec
    seed: int
    train_indices: tuple[int, ...] = ()
    test_indices: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.samples)


def generate(spec: TaskSpec, seed: int, count: int) -> Dataset:
    """Generate ``count`` samples; a pure function of (spec, seed, count).

    The periodic tasks draw their pattern once per dataset (samples repeat
    it at varying lengths); all other tasks draw every sample independently.
    """
    if count < 1:
        raise ConfigError(f"count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    vocab = vocabulary_for(spec)
    shared = _draw_pattern(rng, spec.params) if spec.task_id in (1, 2) else None
    samples = []
    for _ in range(count):
        surfaces = _GENERATORS[spec.task_id](rng, spec.params, shared)
        mask = derive_mask(spec.task_id, surfaces)
        samples.append(TaskSample(vocab.encode(surfaces), tuple(mask)))
    return Dataset(tuple(samples), vocab, spec, seed)


def split(dataset: Dataset, ratio: float, seed: int) -> Dataset:
    """Assign train/test indices by a seeded shuffle; |train| = round(ratio*N)."""
    if not 0.0 < ratio < 1.0:
        raise ConfigError(f"split ratio must be in (0, 1), got {ratio}")
    rng = np.random.default_rng(seed)
    perm = [int(i) for i in rng.permutation(len(dataset.samples))]
    n_train = round(ratio * len(dataset.samples))
    return replace(dataset, train_indices=tuple(perm[:n_train]),
                   test_indices=tuple(perm[n_train:]))


def encode_one_hot(token_id: int, size: int) -> np.ndarray:
    """One-hot float vector of length ``size`` with a single 1 at ``token_id``."""
    if not 0 <= token_id < size:
        raise IndexError(f"token id {token_id} outside 0..{size - 1}")
    vec = np.zeros(size)
    vec[token_id] = 1.0
    return vec


# ---------------------------------------------------------------------------
# Independent counting oracle
# ---------------------------------------------------------------------------

def count_oracle(tokens, query) -> int:
    """Brute-force recount used to verify embedded counting answers.

    For the symbolic tasks (query marker present), ``query`` is a single
    symbol string (task 3) or a sequence of symbols naming one delimited
    pattern (task 4).  For the language tasks, ``query`` is a verb and the
    result is the number of distinct subjects positively tied to it.
    """
    tokens = list(tokens)
    if QUERY_MARKER in tokens:
        prompt = tokens[: tokens.index(QUERY_MARKER)]
        if isinstance(query, str):
            return prompt.count(query)
        target = tuple(query)
        groups: list[tuple[str, ...]] = []
        current: list[str] = []
        for tok in prompt:
            if tok == SEPARATOR:
                groups.append(tuple(current))
                current = []
            else:
                current.append(tok)
        groups.append(tuple(current))
        return groups.count(target)
    if "." not in tokens:
        raise FormatError("not a counting sequence: no query marker or statements")
    if not isinstance(query, str):
        raise FormatError("language tasks take a single verb as the query")
    last_dot = len(tokens) - 1 - tokens[::-1].index(".")
    statement_region = tokens[: last_dot + 1]
    positives: set[str] = set()
    statement: list[str] = []
    for tok in statement_region:
        if tok != ".":
            statement.append(tok)
            continue
        for clause in _split_clauses(statement):
            negative = clause[:3] == ["I", "DO", "NOT"]
            verb = clause[3] if negative else clause[1]
            rest = clause[4:] if negative else clause[2:]
            subjects = [t for t in rest if t not in ("AND", "A") and t not in COLOR_POOL
                        and t not in SIZE_POOL]
            if verb == query and not negative:
                positives.update(subjects)
        statement = []
    return len(positives)


def _split_clauses(statement):
    clauses, current = [], []
    for tok in statement:
        if tok == "BUT":
            clauses.append(current)
            current = []
        else:
            current.append(tok)
    clauses.append(current)
    return clauses


def number_word(count: int) -> str:
    return NUMBER_WORDS[count]


# ---------------------------------------------------------------------------
# Serialization: header + one tokens line and one 0/1 mask line per sample
# ---------------------------------------------------------------------------

def save_dataset(dataset: Dataset, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_dataset(dataset))


def dumps_dataset(dataset: Dataset) -> str:
    lines = [
        f"# task_id={dataset.spec.task_id}",
        f"# seed={dataset.seed}",
        f"# count={len(dataset.samples)}",
        f"# params={json.dumps(dataset.spec.params, sort_keys=True)}",
        f"# vocabulary={' '.join(dataset.vocabulary.tokens)}",
    ]
    for sample in dataset.samples:
        lines.append(" ".join(dataset.vocabulary.decode(sample.tokens)))
        lines.append(" ".join("1" if m else "0" for m in sample.mask))
    return "\n".join(lines) + "\n"


def load_dataset(path) -> Dataset:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_dataset(fh.read())


def loads_dataset(text: str) -> Dataset:
    lines = text.splitlines()
    header = {}
    body_start = 0
    for i, line in enumerate(lines):
        if not line.startswith("# "):
            body_start = i
            break
        key, _, value = line[2:].partition("=")
        header[key] = value
    else:
        body_start = len(lines)
    for key in ("task_id", "seed", "count", "params", "vocabulary"):
        if key not in header:
            raise FormatError(f"dataset header missing {key!r}")
    spec = TaskSpec(int(header["task_id"]), json.loads(header["params"]))
    vocab = Vocabulary(header["vocabulary"].split(" "))
    count = int(header["count"])
    body = [ln for ln in lines[body_start:] if ln]
    if len(body) != 2 * count:
        raise FormatError(f"expected {2 * count} sample lines, found {len(body)}")
    samples = []
    for i in range(count):
        surfaces = body[2 * i].split(" ")
        mask = [c == "1" for c in body[2 * i + 1].split(" ")]
        samples.append(TaskSample(vocab.encode(surfaces), tuple(mask)))
    return Dataset(tuple(samples), vocab, spec, int(header["seed"]))
