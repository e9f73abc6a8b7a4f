"""Only the quadrature oracle may touch floating point."""

import ast
from pathlib import Path

import pytest

import futaki

SRC = Path(futaki.__file__).parent
EXACT_MODULES = sorted(p for p in SRC.glob("*.py") if p.name != "oracle.py")


def float_uses(tree: ast.AST) -> list[str]:
    found = []
    for node in ast.walk(tree):
        if isinstance(node, ast.Constant) and isinstance(node.value, float):
            found.append(f"float literal {node.value!r} at line {node.lineno}")
        elif isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "float":
            found.append(f"float() call at line {node.lineno}")
        elif isinstance(node, (ast.Import, ast.ImportFrom)):
            names = [a.name for a in node.names] if isinstance(node, ast.Import) else [node.module or ""]
            for n in names:
                if n.split(".")[0] in {"numpy", "math", "cmath", "statistics"} or n.endswith("oracle"):
                    found.append(f"import of {n} at line {node.lineno}")
        elif isinstance(node, ast.BinOp) and isinstance(node.op, ast.Div):
            # true division of two int literals yields a float
            if all(isinstance(x, ast.Constant) and isinstance(x.value, int) for x in (node.left, node.right)):
                found.append(f"int/int division at line {node.lineno}")
    return found


@pytest.mark.parametrize("path", EXACT_MODULES, ids=lambda p: p.name)
def test_module_is_float_free(path):
    assert float_uses(ast.parse(path.read_text())) == []


def test_detector_flags_floats():
    bad = "import numpy\nx = 1.5\ny = float(2)\nz = 1 / 2\n"
    assert len(float_uses(ast.parse(bad))) == 4
