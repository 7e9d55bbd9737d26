# SPDX-License-Identifier: Apache-2.0
"""Reference scoring model used to freeze expected rankings for the fixtures.

Written from the scoring rules alone so it can serve as an independent check
on the C++ library. Everything works on plain Python data:

    entry = {
        "url": canonical url,
        "title": str,
        "positions": {provider: position},
        "so_votes": int | None,
        "traffic_rank": int | None,
        "code_blocks": [str],
        "traces": [trace],          # trace = [(type, message|None, [frame])]
        "outlinks": set of canonical urls,
    }

    frame = (class_name, method_name, location) where location is
    "Native Method", "Unknown Source", "File.java" or ("File.java", line).
"""

import math

MASK64 = (1 << 64) - 1
FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
HASH_SEED = 0x5EEDC0DE2013

COMPONENTS = ("cnt", "cxt", "pop", "ser")
DEFAULT_WEIGHTS = {"google": 0.41, "bing": 0.30, "yahoo": 0.29, "stackoverflow": 1.00}


# -- text ---------------------------------------------------------------------

def _ascii_alnum(c):
    return c.isascii() and c.isalnum()


def _humps(word):
    parts, start = [], 0
    for i in range(1, len(word)):
        prev, cur = word[i - 1], word[i]
        split = cur.isupper() and (prev.islower() or prev.isdigit())
        split = split or (prev.isupper() and cur.isupper() and i + 1 < len(word) and word[i + 1].islower())
        if split:
            parts.append(word[start:i])
            start = i
    parts.append(word[start:])
    return parts


def tokenize(text):
    bag = {}
    word = []
    for c in text + " ":
        if _ascii_alnum(c):
            word.append(c)
            continue
        if word:
            for part in _humps("".join(word)):
                tok = part.lower()
                if len(tok) >= 2 and tok != "at":
                    bag[tok] = bag.get(tok, 0) + 1
            word = []
    return bag


def cosine(a, b):
    if not a or not b:
        return 0.0
    dot = 0.0
    na = 0.0
    for tok in sorted(a):
        c = float(a[tok])
        na += c * c
        if tok in b:
            dot += c * float(b[tok])
    nb = 0.0
    for tok in sorted(b):
        nb += float(b[tok]) * float(b[tok])
    return min(1.0, max(0.0, dot / math.sqrt(na * nb)))


def hash64(token):
    h = FNV_OFFSET ^ HASH_SEED
    for byte in token.encode("utf-8"):
        h ^= byte
        h = (h * FNV_PRIME) & MASK64
    h ^= h >> 33
    h = (h * 0xFF51AFD7ED558CCD) & MASK64
    h ^= h >> 33
    h = (h * 0xC4CEB9FE1A85EC53) & MASK64
    h ^= h >> 33
    return h


def simhash(bag):
    sums = [0] * 64
    for tok, count in bag.items():
        h = hash64(tok)
        for bit in range(64):
            sums[bit] += count if (h >> bit) & 1 else -count
    return sum(1 << bit for bit in range(64) if sums[bit] > 0)


def hamming(a, b):
    return bin(a ^ b).count("1")


# -- traces -------------------------------------------------------------------

def _location(loc, line_numbers):
    if isinstance(loc, tuple):
        return f"{loc[0]}:{loc[1]}" if line_numbers else loc[0]
    return loc


def render_trace(trace, line_numbers=True):
    """Canonical text: header, one tab-indented frame per line, causes chained."""
    lines = []
    for i, (etype, message, frames) in enumerate(trace):
        header = etype if message is None else f"{etype}: {message}"
        lines.append(header if i == 0 else "Caused by: " + header)
        for cls, method, loc in frames:
            lines.append(f"\tat {cls}.{method}({_location(loc, line_numbers)})")
    return "\n".join(lines)


# -- metrics ------------------------------------------------------------------

def min_max_distance(distances):
    present = [d for d in distances if d is not None]
    out = []
    for d in distances:
        if d is None:
            out.append(0.0)
        elif max(present) == min(present):
            out.append(1.0)
        else:
            lo, hi = min(present), max(present)
            out.append(1.0 - float(d - lo) / float(hi - lo))
    return out


def min_max_larger_better(values):
    present = [v for v in values if v is not None]
    out = []
    for v in values:
        if v is None:
            out.append(0.0)
        elif max(present) == min(present):
            out.append(1.0)
        else:
            lo, hi = min(present), max(present)
            out.append(float(v - lo) / float(hi - lo))
    return out


def traffic_scores(ranks):
    present = [r for r in ranks if r is not None]
    out = []
    for r in ranks:
        if r is None:
            out.append(0.0)
        elif max(present) == min(present):
            out.append(1.0)
        else:
            lo, hi = min(present), max(present)
            out.append(1.0 - float(r - lo) / float(hi - lo))
    return out


def topten(positions):
    top = [p for _, p in sorted(positions.items()) if 1 <= p <= 10]
    if not top:
        return 0.0
    total = 0.0
    for p in top:
        total += p
    return 1.0 - (total / len(top) - 1.0) / 10.0


def engine_weight(positions, weights):
    total = 0.0
    for provider in sorted(positions):
        total += weights[provider]
    return min(1.0, total)


def pagerank_raw(entries, damping=0.85, tolerance=1e-8, max_iter=100):
    n = len(entries)
    if n == 0:
        return []
    index = {e["url"]: i for i, e in enumerate(entries)}
    links = [sorted(index[u] for u in e["outlinks"] if u in index and index[u] != i) for i, e in enumerate(entries)]
    rank = [1.0 / n] * n
    for _ in range(max_iter):
        dangling = 0.0
        for i in range(n):
            if not links[i]:
                dangling += rank[i]
        nxt = [(1.0 - damping) / n + damping * dangling / n] * n
        for i in range(n):
            if links[i]:
                share = damping * rank[i] / len(links[i])
                for j in links[i]:
                    nxt[j] += share
        change = 0.0
        for i in range(n):
            change += abs(nxt[i] - rank[i])
        rank = nxt
        if change < tolerance:
            break
    return rank


def pagerank_scores(entries):
    raw = pagerank_raw(entries)
    if not raw:
        return []
    lo, hi = min(raw), max(raw)
    if hi - lo <= 1e-12 * hi:
        return [1.0] * len(raw)
    return [(r - lo) / (hi - lo) for r in raw]


# -- fusion -------------------------------------------------------------------

def score_entries(query, entries, enabled, weights=None):
    """Returns one score dict per entry, in the order given."""
    weights = weights or DEFAULT_WEIGHTS
    msg_bag = tokenize(query["message"])

    def distances(target_text, texts_of):
        if target_text is None:
            return [None] * len(entries)
        target = simhash(tokenize(target_text))
        out = []
        for e in entries:
            ds = [hamming(target, simhash(tokenize(t))) for t in texts_of(e)]
            out.append(min(ds) if ds else None)
        return out

    q_trace = render_trace(query["trace"], line_numbers=False) if query.get("trace") else None
    st_d = distances(q_trace, lambda e: [render_trace(t, line_numbers=False) for t in e["traces"]])
    cc_d = distances(query.get("code_context"), lambda e: e["code_blocks"])
    st = min_max_distance(st_d)
    cc = min_max_distance(cc_d)
    so = min_max_larger_better([e["so_votes"] for e in entries])
    pr = pagerank_scores(entries)
    tr = traffic_scores([e["traffic_rank"] for e in entries])

    out = []
    for i, e in enumerate(entries):
        s = {
            "sew": engine_weight(e["positions"], weights),
            "cnt": cosine(msg_bag, tokenize(e["title"])),
            "st": st[i],
            "cc": cc[i],
            "so": so[i],
            "tt": topten(e["positions"]),
            "pr": pr[i],
            "str": tr[i],
            "st_distance": st_d[i],
            "cc_distance": cc_d[i],
        }
        s["pop"] = (s["so"] + s["str"] + s["pr"]) / 3.0
        s["cxt"] = (s["st"] + s["cc"]) / 2.0
        s["ser"] = s["sew"] * s["tt"]
        final = 0.0
        for c in COMPONENTS:
            if c in enabled:
                final += 1.0 * s[c]
        s["final"] = final
        out.append(s)
    return out


class NearTie(Exception):
    pass


def rank(query, entries, enabled, weights=None, tie_guard=1e-9):
    """Canonical urls in ranking order. Raises NearTie when two adjacent keys
    differ by less than `tie_guard` without being equal, since the order would
    then hinge on last-bit rounding."""
    entries = sorted(entries, key=lambda e: e["url"])
    scores = score_entries(query, entries, enabled, weights)
    order = sorted(range(len(entries)),
                   key=lambda i: (-scores[i]["final"], -scores[i]["ser"], -scores[i]["cnt"], entries[i]["url"]))
    for a, b in zip(order, order[1:]):
        for key in ("final", "ser", "cnt"):
            x, y = scores[a][key], scores[b][key]
            if x != y and abs(x - y) < tie_guard:
                raise NearTie(f"{entries[a]['url']} vs {entries[b]['url']} on {key}: {x!r} {y!r}")
            if x != y:
                break
    return [entries[i]["url"] for i in order], {entries[i]["url"]: scores[i] for i in range(len(entries))}
