"""Independent reference implementations shared by several test modules."""


def regularity_all_words_dp(m, max_len):
    """Exact maximum over all decompositions for every word up to max_len.

    Walks the word tree; ``dp[j]`` is the best block count for the prefix
    of length ``j`` split exactly at ``j``.  Yields ``(word, r)``.
    """
    neg = -(10**9)
    stack = [((), [0], [0], {})]
    while stack:
        word, dp, best_prefix, last = stack.pop()
        yield word, max(dp[-1], 0) if word else 0
        if len(word) == max_len:
            continue
        for s in range(1, m + 1):
            nlast = dict(last)
            nlast[s] = len(word)
            w2 = word + (s,)
            if len(nlast) == m:
                start = min(nlast.values())  # block w2[i:] complete iff i <= start
                val = best_prefix[start] + 1 if best_prefix[start] > neg // 2 else neg
            else:
                val = neg
            stack.append((w2, dp + [val], best_prefix + [max(best_prefix[-1], val)], nlast))
