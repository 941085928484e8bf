#!/usr/bin/env python3
"""
Demo script: the classic fair lotteries worked through end to end
"""

import json
import sys
from fractions import Fraction

import pandas as pd

from nap import engine
from nap.cli import run_program
from nap.engine import FAIR_NAT, NAPSpace
from nap.events import SpaceKind, interval, prog
from nap.eventual import DirectedFamily


def generate_demo_scenarios():
    """Query programs for each lottery"""

    return {
        "naturals": {
            "name": "Fair lottery on the natural numbers",
            "description": "Residue classes, a finite set and the smallest nonzero probability",
            "program": "space nat factorial; prob prog(2,0); prob prog(7,3); prob fin{1,2,3}; eps",
        },
        "sizes": {
            "name": "Choice of grid sizes",
            "description": "Evens counted along odd sizes and along all sizes",
            "program": "space nat odd; numerosity prog(2,0)\nspace nat all; prob prog(2,0)",
        },
        "weighted": {
            "name": "Weighted lottery",
            "description": "Odd numbers weigh twice as much as even numbers",
            "program": "space nat factorial weight [1,2]; prob prog(2,1); sum nat weight [1,1]",
        },
        "rationals": {
            "name": "Fair lottery on the rationals",
            "description": "Intervals get probability proportional to their length",
            "program": "space q grid; numerosity interval(0,1); prob nat; cond interval(1/3,1/2) interval(0,2)",
        },
        "reals": {
            "name": "Fair lottery on the reals",
            "description": "An irrational endpoint gives an enclosure of width 2/alpha",
            "program": "space r grid; cond interval(0,sqrt(2)) interval(0,2); st rat",
        },
        "coin": {
            "name": "Infinitely many coin tosses",
            "description": "Cylinders, one infinite sequence and a verified count",
            "program": "space coin ct; prob cyl(i1=H,i2=H,i3=H); point seq(tail=H); verify cyl(i1=T,i3=H) N=1..6",
        },
    }


def progression_table(max_k: int = 8) -> pd.DataFrame:
    """P(prog(k,0)) and its shadow for small k, plus the share on [0,k) of the rationals"""
    q_space = NAPSpace(SpaceKind.Q)
    rows = []
    for k in range(1, max_k + 1):
        value = engine.probability(FAIR_NAT, prog(k, 0))
        share = engine.conditional(q_space, interval(SpaceKind.Q, 0, 1), interval(SpaceKind.Q, 0, k))
        rows.append({
            'k': k,
            'P(prog(k,0))': str(value.value),
            'decimal': engine.decimal_text(Fraction(1, k), 4),
            'P([0,1) | [0,k)) in Q': str(share.value),
        })
    return pd.DataFrame(rows)


def run_scenarios(fmt: str = 'text') -> bool:
    ok = True
    for key, scenario in generate_demo_scenarios().items():
        print(f"\n🎲 {scenario['name']}")
        print("-" * 50)
        print(f"  {scenario['description']}")
        status = run_program(scenario['program'], fmt)
        if status != 0:
            print(f"⚠️ scenario '{key}' finished with status {status}")
            ok = False
    return ok


def main():
    """Main demo function"""

    print("🎯 NON-ARCHIMEDEAN PROBABILITY - DEMO")
    print("=" * 70)
    fmt = 'json' if '--json' in sys.argv else 'text'
    ok = run_scenarios(fmt)

    print("\n📊 Progressions and intervals")
    print("=" * 70)
    print(progression_table().to_string(index=False))

    if '--export' in sys.argv:
        with open('demo_scenarios.json', 'w', encoding='utf-8') as handle:
            json.dump(generate_demo_scenarios(), handle, indent=2)
        print("\n💾 Scenarios written to demo_scenarios.json")

    print(f"\n{'🎉 All scenarios ran' if ok else '⚠️ Some scenarios reported problems'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
