#!/usr/bin/env python3
"""Writes the fixture-provider scenarios under tests/fixtures/mock from the reference scripts.

Each failing attempt breaks the reference program in one of three ways (parse, type,
runtime) so the repair loop sees every error phase. Re-run after changing a reference script.
"""
import pathlib
import shutil

ROOT = pathlib.Path(__file__).resolve().parent.parent
SCRIPTS = ROOT / "data" / "scripts"
OUT = ROOT / "tests" / "fixtures" / "mock"


def reference(rule):
    return (SCRIPTS / f"rule{rule:02}.chk").read_text().rstrip("\n")


def parse_broken(src):
    # Drop the last closing brace.
    i = src.rstrip().rfind("}")
    return src[:i] + src[i + 1:]


def type_broken(src):
    # Compare a count with a length.
    return src + "\nlet mistake = count(collect(Door)) >= 36 in"


def runtime_broken(src):
    return src + "\nlet mistake = 1 / (count(collect(Door)) - count(collect(Door)))"


BREAKERS = [parse_broken, type_broken, runtime_broken]


def fenced(src, lead="Here is the CheckScript program:"):
    return f"{lead}\n\n```checkscript\n{src}\n```\n"


def write(provider, task, attempt, text):
    path = OUT / provider / str(task) / f"attempt{attempt}.txt"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def session(provider, rule, succeed_on=None, failures=None):
    """succeed_on: attempt that returns the working program; None writes only `failures` broken attempts."""
    src = reference(rule)
    count = succeed_on - 1 if succeed_on else failures
    for n in range(1, count + 1):
        write(provider, rule, n, fenced(BREAKERS[(n - 1) % 3](src)))
    if succeed_on:
        write(provider, rule, succeed_on, fenced(src, "Corrected program:" if succeed_on > 1 else "Program:"))


def main():
    if OUT.exists():
        shutil.rmtree(OUT)
    # Corrections 4, 2, 3, 4, 4 on rules 1-5.
    for rule, corrections in zip(range(1, 6), [4, 2, 3, 4, 4]):
        session("claude", rule, succeed_on=corrections + 1)
    # 25.0, 12.5, fail, 11.1, fail. Failed rules run out of fixtures after a few answers.
    session("gemini", 1, succeed_on=4)
    session("gemini", 2, succeed_on=8)
    session("gemini", 3, failures=3)
    session("gemini", 4, succeed_on=9)
    session("gemini", 5, failures=10)
    # Six corrections on rule 1.
    session("chatgpt", 1, succeed_on=7)
    # Parse error, then type error, then a working program.
    src = reference(1)
    write("repair", 1, 1, fenced(parse_broken(src)))
    write("repair", 1, 2, fenced(type_broken(src)))
    write("repair", 1, 3, fenced(src))
    # Works at once, with no code fence.
    write("instant", 2, 1, reference(2) + "\n")
    write("narrator", "report", 1,
          "Summary: the model fails the exit door and guard requirements.\n"
          "Door 2 (Back Door) is 30 in wide and must be widened to 36 in so occupants can leave safely.\n")


if __name__ == "__main__":
    main()
