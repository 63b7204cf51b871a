import ast
from pathlib import Path

import pytest

import resonance

MODULES = sorted(Path(resonance.__file__).parent.rglob("*.py"))


@pytest.mark.parametrize("path", MODULES, ids=lambda p: p.relative_to(Path(resonance.__file__).parent).as_posix())
def test_module_docstring_has_english_companion(path):
    body = ast.parse(path.read_text(encoding="utf-8")).body
    assert ast.get_docstring(ast.Module(body=body, type_ignores=[])), "缺少中文模块文档"
    second = body[1]
    assert isinstance(second, ast.Expr) and isinstance(second.value, ast.Constant)
    assert second.value.value.startswith("EN: ")
