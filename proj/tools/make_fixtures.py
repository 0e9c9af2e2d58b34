#!/usr/bin/env python3
"""Regenerates the test fixtures under tests/fixtures.

toy/    20-problem C -> Python corpus, mock gateway responses, config and the
        hand-traced funnel expectations.
ca/     three language directions x 10 problems with designed failures.
cssim/  50 snippets, ten per language.

Everything is deterministic; rerunning produces identical files.
"""

import argparse
import base64
import json
import random
from pathlib import Path

# name, C statements computing `result`, Python loop statements computing
# `result`, Python expression over `values`.
TASKS = [
    ("sum",
     "long long result = 0;\n    for (int i = 0; i < n; i++) result += values[i];",
     "result = 0\nfor i in range(n):\n    result += values[i]",
     "sum(values)"),
    ("max",
     "long long result = values[0];\n    for (int i = 1; i < n; i++)\n        if (values[i] > result) result = values[i];",
     "result = values[0]\nfor i in range(1, n):\n    if values[i] > result:\n        result = values[i]",
     "max(values)"),
    ("min",
     "long long result = values[0];\n    for (int i = 1; i < n; i++)\n        if (values[i] < result) result = values[i];",
     "result = values[0]\nfor i in range(1, n):\n    if values[i] < result:\n        result = values[i]",
     "min(values)"),
    ("count_even",
     "long long result = 0;\n    for (int i = 0; i < n; i++)\n        if (values[i] % 2 == 0) result++;",
     "result = 0\nfor i in range(n):\n    if values[i] % 2 == 0:\n        result += 1",
     "len([v for v in values if v % 2 == 0])"),
    ("sum_squares",
     "long long result = 0;\n    for (int i = 0; i < n; i++) result += values[i] * values[i];",
     "result = 0\nfor i in range(n):\n    result += values[i] * values[i]",
     "sum(v * v for v in values)"),
    ("spread",
     "long long lo = values[0], hi = values[0];\n    for (int i = 1; i < n; i++) {\n        if (values[i] < lo) lo = values[i];\n        if (values[i] > hi) hi = values[i];\n    }\n    long long result = hi - lo;",
     "lo = values[0]\nhi = values[0]\nfor i in range(1, n):\n    if values[i] < lo:\n        lo = values[i]\n    if values[i] > hi:\n        hi = values[i]\nresult = hi - lo",
     "max(values) - min(values)"),
    ("count_positive",
     "long long result = 0;\n    for (int i = 0; i < n; i++)\n        if (values[i] > 0) result++;",
     "result = 0\nfor i in range(n):\n    if values[i] > 0:\n        result += 1",
     "len([v for v in values if v > 0])"),
    ("alternating",
     "long long result = 0;\n    for (int i = 0; i < n; i++) {\n        if (i % 2 == 0) result += values[i];\n        else result -= values[i];\n    }",
     "result = 0\nfor i in range(n):\n    if i % 2 == 0:\n        result += values[i]\n    else:\n        result -= values[i]",
     "sum(v if i % 2 == 0 else -v for i, v in enumerate(values))"),
    ("records",
     "long long best = values[0], result = 1;\n    for (int i = 1; i < n; i++) {\n        if (values[i] > best) {\n            best = values[i];\n            result++;\n        }\n    }",
     "best = values[0]\nresult = 1\nfor i in range(1, n):\n    if values[i] > best:\n        best = values[i]\n        result += 1",
     "sum(1 for i in range(len(values)) if all(values[i] > values[j] for j in range(i)))"),
    ("sum_abs",
     "long long result = 0;\n    for (int i = 0; i < n; i++) result += values[i] < 0 ? -values[i] : values[i];",
     "result = 0\nfor i in range(n):\n    result += -values[i] if values[i] < 0 else values[i]",
     "sum(abs(v) for v in values)"),
    ("distinct",
     "long long result = 0;\n    for (int i = 0; i < n; i++) {\n        int seen = 0;\n        for (int j = 0; j < i; j++)\n            if (values[j] == values[i]) seen = 1;\n        if (!seen) result++;\n    }",
     "result = 0\nfor i in range(n):\n    seen = 0\n    for j in range(i):\n        if values[j] == values[i]:\n            seen = 1\n    if not seen:\n        result += 1",
     "len(set(values))"),
    ("max_step",
     "long long result = 0;\n    for (int i = 1; i < n; i++) {\n        long long d = values[i] - values[i - 1];\n        if (d < 0) d = -d;\n        if (d > result) result = d;\n    }",
     "result = 0\nfor i in range(1, n):\n    d = values[i] - values[i - 1]\n    if d < 0:\n        d = -d\n    if d > result:\n        result = d",
     "max([abs(values[i] - values[i - 1]) for i in range(1, len(values))] + [0])"),
    ("count_first",
     "long long result = 0;\n    for (int i = 0; i < n; i++)\n        if (values[i] == values[0]) result++;",
     "result = 0\nfor i in range(n):\n    if values[i] == values[0]:\n        result += 1",
     "values.count(values[0])"),
    ("sum_odd_index",
     "long long result = 0;\n    for (int i = 1; i < n; i += 2) result += values[i];",
     "result = 0\nfor i in range(1, n, 2):\n    result += values[i]",
     "sum(values[1::2])"),
    ("last_minus_first",
     "long long result = values[n - 1] - values[0];",
     "result = values[n - 1] - values[0]",
     "values[-1] - values[0]"),
    ("above_mean",
     "long long total = 0, result = 0;\n    for (int i = 0; i < n; i++) total += values[i];\n    for (int i = 0; i < n; i++)\n        if (values[i] * n > total) result++;",
     "total = 0\nresult = 0\nfor i in range(n):\n    total += values[i]\nfor i in range(n):\n    if values[i] * n > total:\n        result += 1",
     "len([v for v in values if v * len(values) > sum(values)])"),
    ("sum_cubes",
     "long long result = 0;\n    for (int i = 0; i < n; i++) result += values[i] * values[i] * values[i];",
     "result = 0\nfor i in range(n):\n    result += values[i] * values[i] * values[i]",
     "sum(v ** 3 for v in values)"),
    ("argmin",
     "long long result = 0;\n    for (int i = 1; i < n; i++)\n        if (values[i] < values[result]) result = i;",
     "result = 0\nfor i in range(1, n):\n    if values[i] < values[result]:\n        result = i",
     "values.index(min(values))"),
    ("sum_again",
     "long long result = 0;\n    for (int i = 0; i < n; i++) result += values[i];",
     "result = 0\nfor i in range(n):\n    result += values[i]",
     "sum(values)"),
    ("count_negative",
     "long long result = 0;\n    for (int i = 0; i < n; i++)\n        if (values[i] < 0) result++;",
     "result = 0\nfor i in range(n):\n    if values[i] < 0:\n        result += 1",
     "len([v for v in values if v < 0])"),
]


def b64(s):
    return base64.b64encode(s.encode()).decode()


def evaluate(task, values):
    return eval(task[3], {"values": values})  # noqa: S307 - trusted table


def test_input(values):
    return f"{len(values)}\n{' '.join(map(str, values))}\n"


def random_tests(rng, count=3):
    out = []
    for _ in range(count):
        n = rng.randint(1, 8)
        out.append([rng.randint(-20, 20) for _ in range(n)])
    return out


# -- program renderers ------------------------------------------------------

def c_program(task, marker, tail="", before_print=""):
    body = task[1]
    return (f"// {marker}\n#include <stdio.h>\n\nint main(void) {{\n    int n;\n"
            f"    long long values[100];\n    if (scanf(\"%d\", &n) != 1) return 1;\n"
            f"    for (int i = 0; i < n; i++) scanf(\"%lld\", &values[i]);\n    {body}\n"
            f"{before_print}    printf(\"%lld\\n\", result{tail});\n    return 0;\n}}\n")


def cpp_program(task, marker, tail="", before_print=""):
    body = task[1]
    return (f"// {marker}\n#include <cstdio>\n#include <vector>\n\nint main() {{\n    int n;\n"
            f"    if (std::scanf(\"%d\", &n) != 1) return 1;\n"
            f"    std::vector<long long> values(n);\n"
            f"    for (int i = 0; i < n; i++) std::scanf(\"%lld\", &values[i]);\n    {body}\n"
            f"{before_print}    std::printf(\"%lld\\n\", result{tail});\n    return 0;\n}}\n")


def py_loop(task, marker, tail="", before_print=""):
    return (f"# {marker}\nn = int(input())\nvalues = list(map(int, input().split()))\n"
            f"{task[2]}\n{before_print}print(result{tail})\n")


def py_solve(task, marker):
    return (f"# {marker}\nimport sys\n\n\ndef solve(values):\n    return {task[3]}\n\n\n"
            f"def main():\n    data = sys.stdin.read().split()\n    count = int(data[0])\n"
            f"    print(solve([int(token) for token in data[1:1 + count]]))\n\n\n"
            f"if __name__ == \"__main__\":\n    main()\n")


def py_negatives(task, marker):
    e1 = task[3].replace("values", "nums")
    e2 = task[3].replace("values", "self.arr")
    e3 = task[3].replace("values", "xs")
    return [
        (f"# {marker}-neg-a\nimport sys\nnums = [int(tok) for tok in sys.stdin.read().split()][1:]\n"
         f"sys.stdout.write(str({e1}) + \"\\n\")\n"),
        (f"# {marker}-neg-b\nclass Solver:\n    def __init__(self, arr):\n        self.arr = arr\n\n"
         f"    def answer(self):\n        return {e2}\n\n\nraw = open(0).read().split()\n"
         f"print(Solver(list(map(int, raw[1:]))).answer())\n"),
        (f"# {marker}-neg-c\ndef read_all():\n    import sys\n    return sys.stdin.read().split()\n\n\n"
         f"tokens = read_all()\nxs = []\nk = 1\nwhile k < len(tokens):\n    xs.append(int(tokens[k]))\n"
         f"    k = k + 1\nanswer = {e3}\nprint(answer)\n"),
    ]


def fenced(code, lang="python"):
    return f"Here is the translation.\n```{lang}\n{code}```\n# End of Code\n"


def snippet(sid, lang, text, origin="mined"):
    return {"snippet_id": sid, "language": lang, "source_text": text, "origin": origin}


def write_jsonl(path, rows):
    path.write_text("".join(json.dumps(r, sort_keys=False) + "\n" for r in rows))


# -- toy corpus -------------------------------------------------------------

HIGH = {"1": -6.0, "2": -5.0, "3": -3.0, "4": -1.0, "5": -0.2}
LOW = {"1": -0.3, "2": -1.0, "3": -4.0, "4": -6.0, "5": -7.0}


def make_toy(root, rng):
    out = root / "toy"
    out.mkdir(parents=True, exist_ok=True)
    problems, mock = [], []
    for k, task in enumerate(TASKS, start=1):
        pid = f"toy{k:02d}"
        src_text = c_program(task, f"{pid}-src")
        if k == 19:  # the source itself fails at run time
            src_text = c_program(task, f"{pid}-src", before_print="    return 3;\n")
        sols = [snippet(f"{pid}-c", "c", src_text)]
        tests = [] if k == 18 else [
            {"input": b64(test_input(v)), "expected_output": None} for v in random_tests(rng)]

        # Function-consistent pairing: mined Python candidates and judge logits.
        if k == 3:
            sols.append(snippet(f"{pid}-py1", "python", py_loop(task, f"{pid}-cand1", tail=" + 1")))
            sols.append(snippet(f"{pid}-py2", "python", py_loop(task, f"{pid}-cand2")))
            mock.append({"op": "score_labels", "contains": f"# {pid}-cand1", "logits": LOW})
            mock.append({"op": "score_labels", "contains": f"# {pid}-cand2", "logits": HIGH})
        elif k != 17:
            wrong = k in (15, 16)
            sols.append(snippet(f"{pid}-py1", "python",
                                py_loop(task, f"{pid}-cand1", tail=" + 1" if wrong else "")))
            mock.append({"op": "score_labels", "contains": f"# {pid}-cand1",
                         "logits": LOW if k in (13, 14) else HIGH})

        # Style data: positives [X, Y, Y, wrong] -> consensus picks index 1.
        style_key = f"### Source code:\n\n// {pid}-src"
        neg_key = f"### C Code:\n\n// {pid}-src"
        x = py_solve(task, f"{pid}-pos")
        y = py_loop(task, f"{pid}-pos")
        w = py_loop(task, f"{pid}-pos", tail=" + 1")
        if k == 15:
            mock.append({"op": "complete", "contains": style_key, "texts": [fenced(w)]})
        elif k == 20:
            mock.append({"op": "complete", "contains": style_key, "texts": [""]})
        elif k not in (13, 14):
            mock.append({"op": "complete", "contains": style_key,
                         "texts": [fenced(x), fenced(y), fenced(y), fenced(w)]})
        negs = [y, y, y] if k == 16 else py_negatives(task, pid)
        mock.append({"op": "complete", "contains": neg_key,
                     "texts": [fenced(t) for t in negs] + [fenced(y)] * 3})

        meta = {"task": task[0]}
        if k == 18:
            meta["eval_only"] = True
        problems.append({"problem_id": pid, "tests": tests, "solutions": sols, "meta": meta})

    write_jsonl(out / "corpus.jsonl", problems)
    write_jsonl(out / "mock.jsonl", mock)
    (out / "config.yaml").write_text(
        "seed: 7\njobs: 1\n"
        "gateway:\n  mock: true\n  fixtures: mock.jsonl\n"
        "judge:\n  k: 5\n  recall_k: 10\n  min_score: 3.0\n"
        "style:\n  m: 4\n  n: 3\n  alpha: 0.8\n  temperature: 0.7\n"
        "limits:\n  wall_time: 5\n")
    expected = {
        "function": {"problems": 20, "paired": 18, "judge_filtered": 16,
                     "difftest_passed": 13, "exported": 13, "failed": 1,
                     "stages": {"exported": [f"toy{k:02d}" for k in range(1, 13)] + ["toy20"],
                                "judge_filtered": ["toy13", "toy14"],
                                "difftest_failed": ["toy15", "toy16"],
                                "unpaired": ["toy17"], "no_tests": ["toy18"],
                                "source_invalid": ["toy19"]},
                     "chosen_target": {"toy03": "toy03-py2"}},
        "style": {"problems": 20, "records": 13, "generated": 72, "functional": 42,
                  "negatives": 39, "failed": 1, "chosen_index": 1,
                  "ineligible": {"no functional candidates": 3, "no negatives below alpha": 1,
                                 "no tests": 1, "source invalid": 1, "no candidates": 1}},
    }
    (out / "expected.json").write_text(json.dumps(expected, indent=2) + "\n")


# -- CA fixture -------------------------------------------------------------

# direction -> failure categories, in the order they are assigned
CA_DIRECTIONS = [
    ("cpp", "python", ["runtime_error", "incorrect_output", "timeout"]),
    ("python", "c", ["compile_error", "runtime_error", "incorrect_output"]),
    ("c", "cpp", ["compile_error", "timeout", "incorrect_output"]),
]

RENDER = {"c": c_program, "cpp": cpp_program, "python": py_loop}


def broken(lang, task, marker, category):
    if category == "incorrect_output":
        return RENDER[lang](task, marker, tail=" + 1")
    if lang == "python":
        if category == "runtime_error":
            return RENDER[lang](task, marker, before_print="values = values[n + 100]\n")
        return RENDER[lang](task, marker, before_print="while True:\n    pass\n")
    if category == "compile_error":
        return RENDER[lang](task, marker).replace("return 0;", "return undeclared_value;")
    if category == "runtime_error":
        return RENDER[lang](task, marker, before_print="    return 3;\n")
    spin = "    volatile int spin = 1;\n    while (spin) {}\n"
    return RENDER[lang](task, marker, before_print=spin)


def make_ca(root, rng):
    out = root / "ca"
    out.mkdir(parents=True, exist_ok=True)
    problems, translations, expected = [], [], {}
    for src, tgt, failures in CA_DIRECTIONS:
        slots = rng.sample(range(10), len(failures))
        design = {slot: cat for slot, cat in zip(slots, failures)}
        for i in range(10):
            task = TASKS[i]
            pid = f"ca-{src}-{tgt}-{i:02d}"
            tests = []
            for j, values in enumerate(random_tests(rng)):
                exp = f"{evaluate(task, values)}\n" if (i + j) % 2 == 0 else None
                tests.append({"input": b64(test_input(values)), "expected_output":
                              b64(exp) if exp is not None else None})
            problems.append({"problem_id": pid, "tests": tests,
                             "solutions": [snippet(f"{pid}-src", src, RENDER[src](task, pid))],
                             "meta": {"task": task[0]}})
            cat = design.get(i, "pass")
            code = RENDER[tgt](task, pid) if cat == "pass" else broken(tgt, task, pid, cat)
            translations.append({"problem_id": pid, "src_lang": src,
                                 "translation": snippet(f"{pid}-tgt", tgt, code, "generated")})
            expected[pid] = cat
    write_jsonl(out / "corpus.jsonl", problems)
    write_jsonl(out / "translations.jsonl", translations)
    (out / "config.yaml").write_text("seed: 11\njobs: 1\nlimits:\n  wall_time: 2\n")
    (out / "expected.json").write_text(json.dumps(
        {"ca": 0.7, "per_direction": 10, "categories": expected}, indent=2) + "\n")


# -- CSSim snippets ---------------------------------------------------------

GO_SNIPPETS = [
    """package main

import "fmt"

func main() {
	var n int
	fmt.Scan(&n)
	total := 0
	for i := 0; i < n; i++ {
		var x int
		fmt.Scan(&x)
		total += x
	}
	fmt.Println(total)
}
""",
    """package main

import (
	"fmt"
	"sort"
)

func main() {
	values := []int{5, 3, 9, 1}
	sort.Ints(values)
	for _, v := range values {
		fmt.Println(v)
	}
}
""",
    """package main

import "fmt"

type Point struct {
	X, Y int
}

func (p Point) Norm1() int {
	return abs(p.X) + abs(p.Y)
}

func abs(v int) int {
	if v < 0 {
		return -v
	}
	return v
}

func main() {
	p := Point{X: 3, Y: -4}
	fmt.Println(p.Norm1())
}
""",
    """package main

import (
	"bufio"
	"fmt"
	"os"
	"strings"
)

func main() {
	reader := bufio.NewReader(os.Stdin)
	line, _ := reader.ReadString('\\n')
	words := strings.Fields(line)
	counts := make(map[string]int)
	for _, w := range words {
		counts[w]++
	}
	fmt.Println(len(counts))
}
""",
    """package main

import "fmt"

func fib(n int) int {
	if n < 2 {
		return n
	}
	return fib(n-1) + fib(n-2)
}

func main() {
	for i := 0; i < 10; i++ {
		fmt.Print(fib(i), " ")
	}
	fmt.Println()
}
""",
    """package main

import "fmt"

func gcd(a, b int) int {
	for b != 0 {
		a, b = b, a%b
	}
	return a
}

func main() {
	var a, b int
	fmt.Scan(&a, &b)
	fmt.Println(gcd(a, b))
}
""",
    """package main

import "fmt"

func classify(v int) string {
	switch {
	case v < 0:
		return "negative"
	case v == 0:
		return "zero"
	default:
		return "positive"
	}
}

func main() {
	for _, v := range []int{-2, 0, 7} {
		fmt.Println(classify(v))
	}
}
""",
    """package main

import (
	"fmt"
	"strconv"
)

func main() {
	parts := []string{"12", "30", "x", "8"}
	sum := 0
	for _, p := range parts {
		n, err := strconv.Atoi(p)
		if err != nil {
			continue
		}
		sum += n
	}
	fmt.Println(sum)
}
""",
    """package main

import "fmt"

type Stack struct {
	items []int
}

func (s *Stack) Push(v int) {
	s.items = append(s.items, v)
}

func (s *Stack) Pop() int {
	last := s.items[len(s.items)-1]
	s.items = s.items[:len(s.items)-1]
	return last
}

func main() {
	s := &Stack{}
	s.Push(1)
	s.Push(2)
	fmt.Println(s.Pop(), s.Pop())
}
""",
    """package main

import "fmt"

func main() {
	grid := [][]int{{1, 2, 3}, {4, 5, 6}}
	best := grid[0][0]
	for r := range grid {
		for c := range grid[r] {
			if grid[r][c] > best {
				best = grid[r][c]
			}
		}
	}
	double := func(x int) int { return x * 2 }
	fmt.Println(double(best))
}
""",
]

JAVA_SNIPPETS = [
    """import java.util.Scanner;

public class Main {
    public static void main(String[] args) {
        Scanner in = new Scanner(System.in);
        int n = in.nextInt();
        long total = 0;
        for (int i = 0; i < n; i++) {
            total += in.nextLong();
        }
        System.out.println(total);
    }
}
""",
    """import java.util.*;

public class Main {
    public static void main(String[] args) {
        List<Integer> values = new ArrayList<>(Arrays.asList(5, 3, 9, 1));
        Collections.sort(values);
        for (int v : values) {
            System.out.println(v);
        }
    }
}
""",
    """public class Main {
    static int gcd(int a, int b) {
        while (b != 0) {
            int t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    public static void main(String[] args) {
        System.out.println(gcd(84, 36));
    }
}
""",
    """import java.util.HashMap;
import java.util.Map;

public class Main {
    public static void main(String[] args) {
        String text = "a b a c b a";
        Map<String, Integer> counts = new HashMap<>();
        for (String w : text.split(" ")) {
            counts.put(w, counts.getOrDefault(w, 0) + 1);
        }
        System.out.println(counts.get("a"));
    }
}
""",
    """public class Main {
    static int fib(int n) {
        return n < 2 ? n : fib(n - 1) + fib(n - 2);
    }

    public static void main(String[] args) {
        StringBuilder sb = new StringBuilder();
        for (int i = 0; i < 10; i++) {
            sb.append(fib(i)).append(' ');
        }
        System.out.println(sb.toString().trim());
    }
}
""",
    """public class Main {
    private int count;

    void increment() {
        count++;
    }

    int value() {
        return this.count;
    }

    public static void main(String[] args) {
        Main counter = new Main();
        counter.increment();
        counter.increment();
        System.out.println(counter.value());
    }
}
""",
    """import java.io.BufferedReader;
import java.io.IOException;
import java.io.InputStreamReader;

public class Main {
    public static void main(String[] args) throws IOException {
        BufferedReader reader = new BufferedReader(new InputStreamReader(System.in));
        String line = reader.readLine();
        if (line == null) {
            return;
        }
        System.out.println(line.trim().length());
    }
}
""",
    """public class Main {
    static String classify(int v) {
        switch (Integer.signum(v)) {
            case -1:
                return "negative";
            case 0:
                return "zero";
            default:
                return "positive";
        }
    }

    public static void main(String[] args) {
        int[] values = {-2, 0, 7};
        for (int v : values) System.out.println(classify(v));
    }
}
""",
    """public class Main {
    public static void main(String[] args) {
        int[][] grid = {{1, 2, 3}, {4, 5, 6}};
        int best = grid[0][0];
        for (int r = 0; r < grid.length; r++) {
            for (int c = 0; c < grid[r].length; c++) {
                best = Math.max(best, grid[r][c]);
            }
        }
        System.out.println(best);
    }
}
""",
    """import java.util.ArrayDeque;
import java.util.Deque;

public class Main {
    public static void main(String[] args) {
        Deque<Integer> stack = new ArrayDeque<>();
        stack.push(1);
        stack.push(2);
        try {
            System.out.println(stack.pop() + stack.pop());
        } catch (RuntimeException e) {
            System.out.println("empty");
        }
    }
}
""",
]


def make_cssim(root):
    out = root / "cssim"
    out.mkdir(parents=True, exist_ok=True)
    for k in range(10):
        task = TASKS[k]
        (out / f"c_{k:02d}.c").write_text(c_program(task, task[0]))
        (out / f"cpp_{k:02d}.cpp").write_text(cpp_program(task, task[0]))
        py = py_loop(task, task[0]) if k % 2 == 0 else py_solve(task, task[0])
        (out / f"python_{k:02d}.py").write_text(py)
        (out / f"go_{k:02d}.go").write_text(GO_SNIPPETS[k])
        (out / f"java_{k:02d}.java").write_text(JAVA_SNIPPETS[k])
    files = sorted(p.name for p in out.iterdir() if p.suffix != ".txt")
    (out / "manifest.txt").write_text(
        "".join(f"{a} {b}\n" for a, b in zip(files[::2], files[1::2])))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "tests" / "fixtures")
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()
    make_toy(args.out, random.Random(args.seed))
    make_ca(args.out, random.Random(args.seed + 1))
    make_cssim(args.out)


if __name__ == "__main__":
    main()
