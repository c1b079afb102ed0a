#!/usr/bin/env python3
"""Reference keyphrase ranker used as a test oracle.

A second, independent implementation of the extraction rules:
clause-bounded stopword-free candidate runs (max 4 tokens), a co-occurrence
graph with window 4 over the candidate token sequence, degree-normalised
PageRank (damping 0.85, at most 50 iterations or L1 change < 1e-6), phrase
salience = sum of token ranks x sum of occurrence factors (1.5 for title
occurrences), top-k by salience then text.

Usage: keyphrase_reference.py CORPUS STOPWORDS COUNT OUT
"""

import json
import sys

CLAUSE_DELIMITERS = set('.,;:!?()[]{}"\n')
MAX_LEN = 4
WINDOW = 4
DAMPING = 0.85
MAX_ITER = 50
TOL = 1e-6
TITLE_BOOST = 1.5
TOP_K = 10


def load_stopwords(path):
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                words.add(line.lower())
    return words


def scan(text):
    """Yield (token, clause) with tokens shorter than 2 characters dropped."""
    out = []
    clause = 0
    current = []
    for ch in text + " ":
        if ch.isalnum() and ch.isascii():
            current.append(ch.lower())
            continue
        if len(current) >= 2:
            out.append(("".join(current), clause))
        current = []
        if ch in CLAUSE_DELIMITERS:
            clause += 1
    return out


def candidates(text, field, stopwords):
    occs = []
    run = []

    def flush():
        for start in range(0, len(run), MAX_LEN):
            chunk = run[start:start + MAX_LEN]
            occs.append((field, chunk[0][0], [t for _, t in chunk]))
        run.clear()

    prev_clause = None
    for pos, (tok, clause) in enumerate(scan(text)):
        if tok in stopwords:
            flush()
            prev_clause = clause
            continue
        if run and prev_clause != clause:
            flush()
        run.append((pos, tok))
        prev_clause = clause
    flush()
    return occs


def rank(title, abstract, stopwords):
    occs = candidates(title, "title", stopwords) + candidates(abstract, "abstract", stopwords)
    if not occs:
        raise ValueError("empty document")
    seq = [t for _, _, toks in occs for t in toks]
    nodes = sorted(set(seq))
    n = len(nodes)
    weights = {v: {} for v in nodes}
    for i in range(len(seq)):
        for j in range(i + 1, min(len(seq), i + WINDOW)):
            a, b = seq[i], seq[j]
            if a == b:
                continue
            weights[a][b] = weights[a].get(b, 0.0) + 1.0
            weights[b][a] = weights[b].get(a, 0.0) + 1.0
    degree = {}
    for v in nodes:
        total = 0.0
        for u in sorted(weights[v]):
            total += weights[v][u]
        degree[v] = total

    score = {v: 1.0 / n for v in nodes}
    teleport = (1.0 - DAMPING) / n
    for _ in range(MAX_ITER):
        new = {}
        for v in nodes:
            s = 0.0
            for u in sorted(weights[v]):
                s += score[u] * weights[v][u] / degree[u]
            new[v] = teleport + DAMPING * s
        delta = 0.0
        for v in nodes:
            delta += abs(new[v] - score[v])
        score = new
        if delta < TOL:
            break

    phrases = {}
    for field, _, toks in occs:
        text = " ".join(toks)
        entry = phrases.setdefault(text, {"tokens": toks, "factors": []})
        entry["factors"].append(TITLE_BOOST if field == "title" else 1.0)
    ranked = []
    for text, entry in phrases.items():
        base = 0.0
        for t in entry["tokens"]:
            base += score[t]
        factor = 0.0
        for f in entry["factors"]:
            factor += f
        ranked.append((text, base * factor))
    ranked.sort(key=lambda p: (-p[1], p[0]))
    return ranked[:TOP_K]


def main(argv):
    corpus_path, stop_path, count, out_path = argv[1], argv[2], int(argv[3]), argv[4]
    with open(corpus_path, encoding="utf-8") as fh:
        corpus = json.load(fh)
    stopwords = load_stopwords(stop_path)
    result = []
    for rec in corpus[:count]:
        phrases = rank(rec.get("title") or "", rec.get("abstract") or "", stopwords)
        result.append({"id": rec["id"], "phrases": [{"text": t, "salience": s} for t, s in phrases]})
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(result, fh, indent=2)
        fh.write("\n")


if __name__ == "__main__":
    main(sys.argv)
