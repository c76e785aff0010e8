#!/usr/bin/env python3
# Copyright 2026 The fingerfuzz Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Stand-alone reimplementation of the collection generator.

Used to freeze expected values in the C++ tests. Shares no code with the
library: SplitMix64-seeded xoshiro256**, rejection-sampled bounded draws,
and the documented generation order.

Usage: fuzzgen_oracle.py [rng SEED COUNT | collection SEED L N M CMD...]
"""

import hashlib
import sys

MASK = (1 << 64) - 1


def rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & MASK


class Rng:
    def __init__(self, seed):
        self.s = []
        x = seed
        for _ in range(4):
            x = (x + 0x9E3779B97F4A7C15) & MASK
            z = x
            z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
            z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
            self.s.append(z ^ (z >> 31))

    def next(self):
        s = self.s
        result = (rotl((s[1] * 5) & MASK, 7) * 9) & MASK
        t = (s[1] << 17) & MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = rotl(s[3], 45)
        return result

    def below(self, n):
        threshold = (2**64 - n) % n
        while True:
            r = self.next()
            if r >= threshold:
                return r % n


ALPHABET = [b for b in range(256) if b not in (0x0D, 0x0A)]
PRINTABLE = [b for b in ALPHABET if 0x20 <= b <= 0x7E]


def mutate(msg, rng):
    ops = ["insert"]
    if msg:
        ops += ["change", "delete"]
    op = ops[rng.below(len(ops))]
    if op == "insert":
        pos = rng.below(len(msg) + 1)
        b = ALPHABET[rng.below(len(ALPHABET))]
        return msg[:pos] + bytes([b]) + msg[pos:]
    if op == "change":
        pos = rng.below(len(msg))
        others = [b for b in ALPHABET if b != msg[pos]]
        b = others[rng.below(len(others))]
        return msg[:pos] + bytes([b]) + msg[pos + 1:]
    pos = rng.below(len(msg))
    return msg[:pos] + msg[pos + 1:]


def collection(seed, max_len, instances, mutations, commands):
    rng = Rng(seed)
    out = []
    for cmd in commands:
        for length in range(max_len + 1):
            for _ in range(instances):
                msg = cmd.encode()
                if length:
                    msg += b" " + bytes(
                        PRINTABLE[rng.below(len(PRINTABLE))] for _ in range(length))
                out.append(msg)
                for _ in range(mutations):
                    msg = mutate(msg, rng)
                    out.append(msg)
    return out


def escape(b):
    s = []
    for c in b:
        if c == 0x5C:
            s.append("\\\\")
        elif 0x20 <= c <= 0x7E:
            s.append(chr(c))
        else:
            s.append("\\x%02x" % c)
    return "".join(s)


def main(argv):
    if argv[1] == "rng":
        rng = Rng(int(argv[2]))
        for _ in range(int(argv[3])):
            print("0x%016xULL" % rng.next())
        return
    seed, L, n, m = (int(a) for a in argv[2:6])
    recs = collection(seed, L, n, m, argv[6:])
    body = "".join(escape(r) + "\n" for r in recs)
    for r in recs:
        print(escape(r))
    print("digest", hashlib.sha256(body.encode()).hexdigest(), file=sys.stderr)


if __name__ == "__main__":
    main(sys.argv)
