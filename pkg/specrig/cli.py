#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/12 15:03
# @Author : Ray
# @File : cli.py
# @Software: PyCharm
"""
命令行入口：构造、计算、比较与验证，输出机器可读的报告。

退出码: 0 成功/等价，1 用法或输入错误，2 假设不成立，3 重建失败。
"""
import sys
from pathlib import Path
from typing import Annotated, Any, Callable, Literal, Optional

import click
import typer
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from specrig.errors.error_handlers import cli_error_handler
from specrig.errors.exceptions import MissingParameterError, ParameterRangeError
from specrig.services import serialization as ser
from specrig.services.config_loader import default_tolerance
from specrig.services.exceptional_set import corollary_check, exceptional_set
from specrig.services.generators import (
    Family,
    build_family,
    random_conjugate,
    relation_residuals,
    CLI_FAMILY_NAMES,
)
from specrig.services.pencil_parser import evaluate_pencil, parse_pencil
from specrig.services.rigidity_service import counterexample_demo, reconstruct_sl2, reconstruct_snu2
from specrig.services.spectrum_service import (
    det_pencil,
    det_pencil_homogeneous,
    lines_of_pair,
    pencil_label,
    spectra_equal,
)
from specrig.utils.logger import logger

Command = Literal["gen", "det", "lines", "compare", "rigidity", "exceptional", "relations", "counterexample"]
OutputFormat = Literal["json", "csv", "text"]


class RunConfig(BaseModel):
    """一次命令行调用的完整配置"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    command: Command
    tol: float = Field(default_factory=default_tolerance, gt=0)
    output: Optional[Path] = None
    format: OutputFormat = "json"
    seed: Optional[int] = None
    threads: int = Field(default=1, ge=1)
    params: dict[str, Any] = Field(default_factory=dict)


class CommandResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    exit_code: int = 0
    doc: Any = None
    title: str = ""
    columns: list[str] = Field(default_factory=list)
    rows: list[list[Any]] = Field(default_factory=list)


def _parse_complex(value) -> complex:
    try:
        return complex(str(value).replace(" ", ""))
    except ValueError:
        raise ParameterRangeError(f"无法解析为复数: {value!r}")


def _require(params: dict, name: str):
    if params.get(name) is None:
        raise MissingParameterError(f"缺少参数 --{name.replace('_', '-')}。")
    return params[name]


def _matrix_rows(names, mats) -> list[list[Any]]:
    rows = []
    for name, m in zip(names, mats):
        for (i, j), z in zip(((i, j) for i in range(m.shape[0]) for j in range(m.shape[1])), m.ravel()):
            if z != 0:
                rows.append([name, i, j, float(z.real), float(z.imag)])
    return rows


def _run_gen(config: RunConfig) -> CommandResult:
    p = config.params
    family = _require(p, "family")
    kwargs = {k: _parse_complex(p[k]) for k in ("c", "alpha", "beta", "gamma", "delta") if p.get(k) is not None}
    if CLI_FAMILY_NAMES.get(family) is Family.RANDOM_CONJUGATE:
        base = build_family(p.get("base_family") or "snu2", p.get("n"), p.get("nu"), **kwargs)
        t, _ = random_conjugate(base, p.get("kind") or "unitary", config.seed)
    else:
        t = build_family(family, p.get("n"), p.get("nu"), **kwargs)
    return CommandResult(doc=ser.tuple_to_json(t), title=f"{t.family.value} (n={t.n})",
                         columns=["matrix", "i", "j", "re", "im"],
                         rows=_matrix_rows(("H", "E", "F"), t.matrices()))


def _pencil_matrices(config: RunConfig):
    p = config.params
    t = ser.load_tuple(_require(p, "tuple_path"))
    exprs = parse_pencil(_require(p, "pencil"))
    return evaluate_pencil(exprs, t.matrices()), exprs


def _run_det(config: RunConfig) -> CommandResult:
    p = config.params
    mats, exprs = _pencil_matrices(config)
    var_names = [v.strip() for v in p["vars"].split(",")] if p.get("vars") else None
    if p.get("homogeneous"):
        poly = det_pencil_homogeneous(mats, var_names, p["homogeneous"], threads=config.threads)
    else:
        poly = det_pencil(mats, var_names, threads=config.threads)
    logger.info(f"束 {pencil_label(exprs)}: {len(poly.terms)} 项, 总次数 {poly.total_degree()}")
    return CommandResult(doc=ser.poly_to_json(poly), title=f"det {pencil_label(exprs)}",
                         columns=["exp", "re", "im"],
                         rows=[[" ".join(map(str, e)), c.real, c.imag] for e, c in poly.sorted_terms()])


def _run_lines(config: RunConfig) -> CommandResult:
    mats, exprs = _pencil_matrices(config)
    if len(mats) != 2:
        raise ParameterRangeError(f"lines 需要两个位置的束，实际为 {pencil_label(exprs)}。")
    arrangement, certified = lines_of_pair(mats[0], mats[1], config.tol)
    rows = [[" ".join(f"{c.real:.12g}{c.imag:+.12g}j" for c in line.coeffs), line.mult]
            for line in arrangement.lines]
    return CommandResult(exit_code=0, doc=ser.arrangement_to_json(arrangement, certified),
                         title=f"lines {pencil_label(exprs)} certified={certified}",
                         columns=["coeffs", "mult"], rows=rows)


def _run_compare(config: RunConfig) -> CommandResult:
    p = config.params
    first = ser.load_tuple(_require(p, "tuple_path"))
    if p.get("against_path"):
        second = ser.load_tuple(p["against_path"])
    else:
        second = build_family(_require(p, "family"), p.get("n") or first.n, p.get("nu"))
    results = spectra_equal(first.matrices(), second.matrices(), _require(p, "pencil"), config.tol)
    doc = {"pencils": [{"pencil": r.label, "equal": r.equal, "max_diff": r.max_diff} for r in results],
           "all_equal": all(r.equal for r in results)}
    return CommandResult(doc=doc, title="compare", columns=["pencil", "equal", "max_diff"],
                         rows=[[r.label, r.equal, r.max_diff] for r in results])


def _run_rigidity(config: RunConfig) -> CommandResult:
    p = config.params
    t = ser.load_tuple(_require(p, "tuple_path"))
    family = p.get("family") or "snu2"
    n = p.get("n") or t.n
    assume = bool(p.get("assume_hypotheses"))
    if family == "snu2":
        report = reconstruct_snu2(t.matrices(), n, _require(p, "nu"), config.tol, assume)
    elif family == "sl2":
        report = reconstruct_sl2(t.matrices(), n, config.tol, assume)
    else:
        raise ParameterRangeError(f"rigidity 只支持 snu2 / sl2，实际为 {family}。")
    rows = [[d.step, d.code, d.message] for d in report.diagnostics]
    return CommandResult(exit_code=report.exit_code, doc=ser.report_to_json(report),
                         title=f"{family} n={n}: {report.verdict.value}",
                         columns=["step", "code", "message"], rows=rows)


def _run_exceptional(config: RunConfig) -> CommandResult:
    n = _require(config.params, "n")
    s = exceptional_set(n)
    check = corollary_check(n)
    doc = {
        "n": n,
        "roots": [{"i": r.i, "j": r.j, "z": r.z, "nu": r.nu} for r in s.roots],
        "set": s.values(),
        "corollary_ok": check.ok,
        "coincidences": [[list(pair) for pair in group] for group in check.coincidences],
    }
    return CommandResult(doc=doc, title=f"exceptional set n={n}", columns=["i", "j", "z", "nu"],
                         rows=[[r.i, r.j, r.z, r.nu] for r in s.roots])


def _run_relations(config: RunConfig) -> CommandResult:
    p = config.params
    t = build_family(_require(p, "family"), p.get("n"), p.get("nu"),
                     **({"c": _parse_complex(p["c"])} if p.get("c") is not None else {}))
    residual = relation_residuals(t, p.get("orientation") or "standard")
    doc = {"family": t.family.value, "n": t.n, "nu": t.nu, "orientation": residual.orientation.value,
           "r1": residual.r1, "r2": residual.r2, "r3": residual.r3}
    return CommandResult(doc=doc, title=f"relations ({residual.orientation.value})",
                         columns=["relation", "residual"],
                         rows=[["r1", residual.r1], ["r2", residual.r2], ["r3", residual.r3]])


def _run_counterexample(config: RunConfig) -> CommandResult:
    p = config.params
    values = [_parse_complex(p.get(k, d)) for k, d in (("alpha", 1), ("beta", 2), ("gamma", 2), ("delta", 1))]
    demo = counterexample_demo(*values, tol=config.tol)
    doc = {
        "params": [ser.complex_pair(v) for v in demo.params],
        "three_pencil_equal": demo.three_pencil_equal,
        "three_pencil_diff": demo.three_pencil_diff,
        "commutator": ser.matrix_to_json(demo.commutator),
        "commutator_residual": demo.commutator_residual,
        "sl2_report": ser.report_to_json(demo.sl2_report),
    }
    rows = [["three_pencil_equal", demo.three_pencil_equal],
            ["commutator_residual", demo.commutator_residual],
            ["sl2_verdict", demo.sl2_report.verdict.value]]
    return CommandResult(doc=doc, title="counterexample", columns=["quantity", "value"], rows=rows)


_HANDLERS: dict[str, Callable[[RunConfig], CommandResult]] = {
    "gen": _run_gen,
    "det": _run_det,
    "lines": _run_lines,
    "compare": _run_compare,
    "rigidity": _run_rigidity,
    "exceptional": _run_exceptional,
    "relations": _run_relations,
    "counterexample": _run_counterexample,
}


def run(config: RunConfig) -> tuple[int, bytes]:
    """
    按命令分发并按 format 编码报告，返回 (退出码, 输出字节)。
    """
    logger.info(f"执行命令 {config.command}, tol={config.tol}, format={config.format}")
    result = _HANDLERS[config.command](config)
    if config.format == "json":
        payload = ser.dumps(result.doc)
    elif config.format == "csv":
        payload = ser.to_csv(result.columns, result.rows).encode("utf-8")
    else:
        payload = ser.render_table(result.title, result.columns, result.rows).encode("utf-8")
    return result.exit_code, payload


app = typer.Typer(add_completion=False, no_args_is_help=True,
                  help="联合谱行列式多项式与谱刚性验证工具")

TolOpt = Annotated[Optional[float], typer.Option("--tol", help="数值容差，默认取配置或 SPECRIG_TOL")]
OutputOpt = Annotated[Optional[Path], typer.Option("--output", "-o", help="输出文件，默认写到标准输出")]
FormatOpt = Annotated[str, typer.Option("--format", help="json | csv | text")]
SeedOpt = Annotated[Optional[int], typer.Option("--seed", help="随机夹具的种子")]
ThreadsOpt = Annotated[int, typer.Option("--threads", help="行列式网格求值的线程数")]
TupleOpt = Annotated[Optional[Path], typer.Option("--tuple", help="生成元三元组JSON文件")]
PencilOpt = Annotated[Optional[str], typer.Option("--pencil", help='例如 "A1, A2 A2^H"')]


def _execute(command: str, tol, output, fmt, seed=None, threads=1, **params) -> None:
    try:
        config = RunConfig(command=command, output=output, format=fmt, seed=seed, threads=threads,
                           params={k: v for k, v in params.items() if v is not None},
                           **({"tol": tol} if tol is not None else {}))
    except ValidationError as e:
        raise ParameterRangeError(f"参数无效: {e.errors()[0]['loc']} {e.errors()[0]['msg']}")
    exit_code, payload = run(config)
    ser.write_output(payload, config.output)
    raise typer.Exit(exit_code)


@app.command()
def gen(family: Annotated[str, typer.Option("--family", help=" | ".join(CLI_FAMILY_NAMES))],
        n: Annotated[Optional[int], typer.Option("--n")] = None,
        nu: Annotated[Optional[float], typer.Option("--nu")] = None,
        c: Annotated[Optional[str], typer.Option("--c")] = None,
        alpha: Annotated[Optional[str], typer.Option("--alpha")] = None,
        beta: Annotated[Optional[str], typer.Option("--beta")] = None,
        gamma: Annotated[Optional[str], typer.Option("--gamma")] = None,
        delta: Annotated[Optional[str], typer.Option("--delta")] = None,
        base_family: Annotated[Optional[str], typer.Option("--base-family")] = None,
        kind: Annotated[Optional[str], typer.Option("--kind", help="phase | unitary")] = None,
        tol: TolOpt = None, output: OutputOpt = None, fmt: FormatOpt = "json", seed: SeedOpt = None):
    """构造生成元三元组"""
    _execute("gen", tol, output, fmt, seed, family=family, n=n, nu=nu, c=c, alpha=alpha, beta=beta,
             gamma=gamma, delta=delta, base_family=base_family, kind=kind)


@app.command()
def det(tuple_path: TupleOpt = None, pencil: PencilOpt = None,
        var_names: Annotated[Optional[str], typer.Option("--vars", help="变量名，逗号分隔")] = None,
        homogeneous: Annotated[Optional[str], typer.Option("--homogeneous", help="齐次化变量名，如 t")] = None,
        tol: TolOpt = None, output: OutputOpt = None, fmt: FormatOpt = "json", threads: ThreadsOpt = 1):
    """计算 det(x1 M1 + … + xk Mk − I)"""
    _execute("det", tol, output, fmt, threads=threads, tuple_path=tuple_path, pencil=pencil, vars=var_names,
             homogeneous=homogeneous)


@app.command()
def lines(tuple_path: TupleOpt = None, pencil: PencilOpt = None,
          tol: TolOpt = None, output: OutputOpt = None, fmt: FormatOpt = "json"):
    """两矩阵束的直线分解与完全可约认证"""
    _execute("lines", tol, output, fmt, tuple_path=tuple_path, pencil=pencil)


@app.command()
def compare(tuple_path: TupleOpt = None, pencil: PencilOpt = None,
            against: Annotated[Optional[Path], typer.Option("--against", help="另一组三元组JSON")] = None,
            family: Annotated[Optional[str], typer.Option("--family")] = None,
            n: Annotated[Optional[int], typer.Option("--n")] = None,
            nu: Annotated[Optional[float], typer.Option("--nu")] = None,
            tol: TolOpt = None, output: OutputOpt = None, fmt: FormatOpt = "json"):
    """逐个束比较两组矩阵的联合谱，多个束用分号分隔"""
    _execute("compare", tol, output, fmt, tuple_path=tuple_path, pencil=pencil, against_path=against,
             family=family, n=n, nu=nu)


@app.command()
def rigidity(tuple_path: TupleOpt = None,
             family: Annotated[str, typer.Option("--family", help="snu2 | sl2")] = "snu2",
             n: Annotated[Optional[int], typer.Option("--n")] = None,
             nu: Annotated[Optional[float], typer.Option("--nu")] = None,
             assume_hypotheses: Annotated[bool, typer.Option("--assume-hypotheses")] = False,
             tol: TolOpt = None, output: OutputOpt = None, fmt: FormatOpt = "json"):
    """验证谱刚性假设并重建酉见证"""
    _execute("rigidity", tol, output, fmt, tuple_path=tuple_path, family=family, n=n, nu=nu,
             assume_hypotheses=assume_hypotheses)


@app.command()
def exceptional(n: Annotated[int, typer.Option("--n")],
                as_json: Annotated[bool, typer.Option("--json", help="等同于 --format json")] = False,
                as_csv: Annotated[bool, typer.Option("--csv", help="等同于 --format csv")] = False,
                tol: TolOpt = None, output: OutputOpt = None, fmt: FormatOpt = "json"):
    """列出例外参数集 S"""
    if as_json and as_csv:
        raise ParameterRangeError("--json 与 --csv 不能同时使用。")
    if as_json or as_csv:
        fmt = "json" if as_json else "csv"
    _execute("exceptional", tol, output, fmt, n=n)



@app.command()
def relations(family: Annotated[str, typer.Option("--family")] = "snu2",
              n: Annotated[Optional[int], typer.Option("--n")] = None,
              nu: Annotated[Optional[float], typer.Option("--nu")] = None,
              c: Annotated[Optional[str], typer.Option("--c")] = None,
              orientation: Annotated[str, typer.Option("--orientation", help="standard | swapped")] = "standard",
              tol: TolOpt = None, output: OutputOpt = None, fmt: FormatOpt = "json"):
    """对易关系残差"""
    _execute("relations", tol, output, fmt, family=family, n=n, nu=nu, c=c, orientation=orientation)


@app.command()
def counterexample(alpha: Annotated[str, typer.Option("--alpha")] = "1",
                   beta: Annotated[str, typer.Option("--beta")] = "2",
                   gamma: Annotated[str, typer.Option("--gamma")] = "2",
                   delta: Annotated[str, typer.Option("--delta")] = "1",
                   tol: TolOpt = None, output: OutputOpt = None, fmt: FormatOpt = "json"):
    """三矩阵束谱相同但不满足刚性假设的反例"""
    _execute("counterexample", tol, output, fmt, alpha=alpha, beta=beta, gamma=gamma, delta=delta)


@cli_error_handler
def main(argv: list[str] | None = None) -> int:
    try:
        rv = app(args=argv, prog_name="specrig", standalone_mode=False)
    except click.exceptions.UsageError as e:
        # click 自身的用法错误码是2，与 hypothesis_failed 冲突，统一改为1
        print(e.format_message(), file=sys.stderr)
        return 1
    except click.exceptions.Abort:
        return 1
    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    sys.exit(main())
