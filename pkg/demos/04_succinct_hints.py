"""The two compressed prediction formats: a stop-index hint for water-filling
and an interval encoding for the balanced cut."""

import json
from fractions import Fraction

from plantsteal import (
    ValuesPrediction,
    cut_and_balance,
    decode_cb,
    encode_cb,
    encode_wf,
    water_filling,
)
from plantsteal.predictions import cb_achieved_gap, prediction_to_json


def main():
    v1 = [Fraction(4, 10), Fraction(3, 10), Fraction(2, 10), Fraction(1, 10)]
    wf = encode_wf(v1, v1)
    print("water-filling hint for values (0.4, 0.3, 0.2, 0.1):")
    print(f"  stop index {wf.j0}, crossing agent {wf.b}, {wf.bit_size} bits")
    print(f"  reconstructed split: {tuple(sorted(s) for s in water_filling(range(4), wf))}\n")

    vals = [9, 7, 6, 5, 3, 3, 2, 2, 1, 1]
    enc = encode_cb(vals, ValuesPrediction(vals), epsilon=Fraction(1, 4))
    s1, s2, transfer, chooser = decode_cb(enc)
    print(f"cut-and-balance hint for {vals} (eps = 1/4):")
    print(f"  serialized: {json.dumps(prediction_to_json(enc))}")
    print(f"  decodes to S1={sorted(s1)} S2={sorted(s2)} transfer={sorted(transfer)}"
          f" chooser={chooser}")
    print(f"  {enc.bit_size} bits; achieved share fraction"
          f" {float(cb_achieved_gap(enc, vals)):.3f} of the true two-bundle share")
    a1, a2 = cut_and_balance(range(10), enc)
    print(f"  balanced bundles: A1={sorted(a1)} ({sum(vals[j] for j in a1)}),"
          f" A2={sorted(a2)} ({sum(vals[j] for j in a2)})")


if __name__ == "__main__":
    main()
