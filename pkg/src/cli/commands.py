"""
命令行入口

配置优先级: config/config.yaml 默认值 < --config 指定的运行配置文件 < 命令行参数。
所有命令输出一个 JSON 报告（stdout 或 --out），异常按类型映射为退出码:
0 成功，2 用法/解析错误，3 数值不收敛，4 I/O 错误。
"""

import functools
import sys
import time
from typing import Any, Callable, Dict, List, Optional

import click
import numpy as np

from .. import __version__
from ..core.config import ConfigManager, RunConfig, load_run_file
from ..core.exceptions import JuliaSeekerException, ValidationError, handle_exceptions
from ..core.logger import get_logger, setup_logging
from ..dynamics.cloud import SetApprox
from ..dynamics.compare import julia_compare
from ..dynamics.semigroup import SemigroupSpec, approx_E, approx_J_semigroup, coverage_experiment
from ..dynamics.single import julia_cloud_single
from ..lemmas.circles import circle_lemma_check, monomial_pair_julia_radius, monomial_rigidity_check
from ..lemmas.line_dynamics import (
    LineWord,
    LogDynParams,
    as_fraction,
    commutator_value,
    d_n_value,
    density_march,
    line_apply,
    reversed_commutator_value,
)
from ..poly.parser import parse_poly
from .render import escape_image, rasterize, write_image
from .report import build_report, write_report

IO_EXIT_CODE = 4
RENDER_MODES = ["single", "semigroup-julia", "invariant-set", "escape"]


def exit_codes(func: Callable) -> Callable:
    """把异常转换为约定的退出码"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except JuliaSeekerException as e:
            click.echo(f"错误: {e}", err=True)
            if e.exit_code == 2:
                ctx = click.get_current_context(silent=True)
                if ctx is not None:
                    click.echo(ctx.get_usage(), err=True)
            sys.exit(e.exit_code)
        except OSError as e:
            click.echo(f"I/O 错误: {e}", err=True)
            sys.exit(IO_EXIT_CODE)

    return wrapper


def _parse_window(ctx, param, value):
    if value is None:
        return None
    try:
        parts = tuple(float(x) for x in value.split(","))
    except ValueError:
        raise click.BadParameter("格式应为 re0,im0,re1,im1")
    if len(parts) != 4:
        raise click.BadParameter("需要4个数值 re0,im0,re1,im1")
    return parts


def _parse_radii(ctx, param, value):
    try:
        return [float(x) for x in value.split(",") if x.strip()]
    except ValueError:
        raise click.BadParameter("格式应为逗号分隔的实数")


def run_options(func: Callable) -> Callable:
    """各实验命令共用的参数"""
    options = [
        click.option("--gen", "generators", multiple=True, help="生成元多项式表达式，可重复"),
        click.option("--depth", type=int, default=None, help="扩展深度"),
        click.option("--budget", type=int, default=None, help="点云预算"),
        click.option("--seed", type=int, default=None, help="随机种子"),
        click.option("--grid", "grid_cells", type=int, default=None, help="球面网格格子数"),
        click.option("--tol", type=float, default=None, help="比较阈值"),
        click.option("--samples", type=int, default=None, help="比较时每个 Julia 点云的点数"),
        click.option("--workers", type=int, default=None, help="点云扩展线程数"),
        click.option("--out", type=click.Path(dir_okay=False), default=None, help="报告输出路径"),
        click.option("--image", type=click.Path(dir_okay=False), default=None, help="图像输出路径 (.ppm/.png)"),
        click.option("--width", type=int, default=None, help="图像宽度"),
        click.option("--height", type=int, default=None, help="图像高度"),
        click.option("--window", callback=_parse_window, default=None, help="复平面窗口 re0,im0,re1,im1"),
        click.option("--config", "config_file", type=click.Path(dir_okay=False), default=None,
                     help="JSON/YAML 运行配置文件"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def resolve_config(ctx: click.Context, overrides: Dict[str, Any]) -> RunConfig:
    """合并默认配置、运行配置文件与命令行参数"""
    config_file = overrides.pop("config_file", None)
    config = ctx.obj["config_manager"].get_run_config()
    if config_file:
        config = config.merged(load_run_file(config_file))
    return config.merged(overrides).validate()


def _spec(config: RunConfig, minimum: int = 1, exact: Optional[int] = None) -> SemigroupSpec:
    count = len(config.generators)
    if exact is not None and count != exact:
        raise ValidationError(f"需要恰好 {exact} 个生成元, 实际 {count} 个", field_name="generators")
    if count < minimum:
        raise ValidationError(f"至少需要 {minimum} 个生成元, 实际 {count} 个", field_name="generators")
    return SemigroupSpec.from_strings(config.generators)


def _emit(command: str, config_echo: Dict[str, Any], results: Dict[str, Any], seed: int,
          started: float, out: Optional[str]) -> None:
    elapsed = time.time() - started
    report = build_report(command, config_echo, results, seed, {"total_seconds": elapsed})
    write_report(report, out)
    get_logger().log_experiment(command, elapsed, {"out": out})


def _cloud_results(cloud: SetApprox) -> Dict[str, Any]:
    results = cloud.summary()
    results["finite_points"] = int(cloud.finite_points().size)
    return results


def _maybe_render(config: RunConfig, points: np.ndarray, results: Dict[str, Any]) -> None:
    if not config.image:
        return
    image = rasterize(points, config.width, config.height, config.window)
    results["image"] = {
        "path": write_image(config.image, image),
        "width": config.width,
        "height": config.height,
        "window": list(config.window),
        "marked_pixels": int(np.count_nonzero(image)),
    }


@click.group()
@click.version_option(__version__, prog_name="julia-seeker")
@click.pass_context
def cli(ctx: click.Context):
    """Julia-Seeker: 多项式半群的 Julia 集与完全不变集数值实验"""
    ctx.ensure_object(dict)
    if "config_manager" not in ctx.obj:
        try:
            manager = ConfigManager()
        except JuliaSeekerException as e:
            click.echo(f"错误: {e}", err=True)
            sys.exit(e.exit_code)
        ctx.obj["config_manager"] = manager
        system = manager.get_system_config()
        setup_logging(log_level="DEBUG" if system.debug_mode else system.log_level, log_dir=system.log_dir)


@cli.command()
@run_options
@click.option("--mode", type=click.Choice(RENDER_MODES), default=None, help="渲染模式")
@click.pass_context
@exit_codes
def render(ctx: click.Context, **options):
    """渲染点云或逃逸时间图像"""
    _render(ctx, options)


@handle_exceptions(JuliaSeekerException, reraise=True)
def _render(ctx: click.Context, options: Dict[str, Any]) -> None:
    started = time.time()
    config = resolve_config(ctx, options)
    if not config.image:
        raise ValidationError("render 需要 --image", field_name="image")
    get_logger().log_run_start("render", config.to_dict())
    spec = _spec(config, exact=1 if config.mode == "escape" else None)

    if config.mode == "escape":
        image = escape_image(spec.generators[0], config.width, config.height, config.window, config.max_iter)
        results: Dict[str, Any] = {"mode": config.mode}
    else:
        if config.mode == "single":
            clouds = [julia_cloud_single(g, depth=config.depth, budget=config.budget, seed=config.seed,
                                         workers=config.workers) for g in spec.generators]
            points = np.concatenate([c.points for c in clouds])
            results = {"mode": config.mode, "clouds": [c.summary() for c in clouds]}
        else:
            engine = approx_J_semigroup if config.mode == "semigroup-julia" else approx_E
            cloud = engine(spec, config.depth, config.budget, config.seed, workers=config.workers)
            points = cloud.points
            results = {"mode": config.mode, "cloud": _cloud_results(cloud)}
        image = rasterize(points, config.width, config.height, config.window)

    results["image"] = {
        "path": write_image(config.image, image),
        "width": config.width,
        "height": config.height,
        "window": list(config.window),
        "marked_pixels": int(np.count_nonzero(image)),
    }
    _emit("render", config.to_dict(), results, config.seed, started, config.out)


@cli.command("semigroup-julia")
@run_options
@click.pass_context
@exit_codes
def semigroup_julia(ctx: click.Context, **options):
    """逆向字轨道逼近 J(G)"""
    _cloud_command(ctx, "semigroup-julia", approx_J_semigroup, options)


@cli.command("invariant-set")
@run_options
@click.pass_context
@exit_codes
def invariant_set(ctx: click.Context, **options):
    """正逆向字轨道逼近 E(G)"""
    _cloud_command(ctx, "invariant-set", approx_E, options)


@handle_exceptions(JuliaSeekerException, reraise=True)
def _cloud_command(ctx: click.Context, command: str, engine: Callable, options: Dict[str, Any]) -> None:
    started = time.time()
    config = resolve_config(ctx, options)
    get_logger().log_run_start(command, config.to_dict())
    spec = _spec(config)
    cloud = engine(spec, config.depth, config.budget, config.seed, workers=config.workers)
    results = {"cloud": _cloud_results(cloud)}
    _maybe_render(config, cloud.points, results)
    _emit(command, config.to_dict(), results, config.seed, started, config.out)


@cli.command()
@run_options
@click.pass_context
@exit_codes
def coverage(ctx: click.Context, **options):
    """E(G) 点云在等面积球面网格上的覆盖率曲线"""
    _coverage(ctx, options)


@handle_exceptions(JuliaSeekerException, reraise=True)
def _coverage(ctx: click.Context, options: Dict[str, Any]) -> None:
    started = time.time()
    config = resolve_config(ctx, options)
    get_logger().log_run_start("coverage", config.to_dict())
    spec = _spec(config, minimum=2)
    result = coverage_experiment(spec, config.grid_cells, config.depth, config.budget, config.seed,
                                 workers=config.workers)
    results = {
        "curve": [[depth, fraction] for depth, fraction in result.curve],
        "final_fraction": result.final_fraction,
        "grid": result.grid.scheme.describe(),
        "cloud": _cloud_results(result.cloud),
    }
    _maybe_render(config, result.cloud.points, results)
    _emit("coverage", config.to_dict(), results, config.seed, started, config.out)


@cli.command()
@run_options
@click.pass_context
@exit_codes
def compare(ctx: click.Context, **options):
    """用 Green 函数判断两个生成元的 Julia 集是否相等"""
    _compare(ctx, options)


@handle_exceptions(JuliaSeekerException, reraise=True)
def _compare(ctx: click.Context, options: Dict[str, Any]) -> None:
    started = time.time()
    config = resolve_config(ctx, options)
    get_logger().log_run_start("compare", config.to_dict())
    f, g = _spec(config, exact=2).generators
    result = julia_compare(f, g, samples=config.samples, tol=config.tol, seed=config.seed,
                           max_iter=config.max_iter, workers=config.workers)
    _emit("compare", config.to_dict(), {"comparison": result}, config.seed, started, config.out)


@cli.group()
def lemma():
    """精确算术与数值引理检查"""


def _lemma_report(command: str, params: Dict[str, Any], results: Dict[str, Any],
                  started: float, out: Optional[str]) -> None:
    _emit(f"lemma {command}", params, results, 0, started, out)


def _params(j: int, m: int, c: str, rstar: str) -> LogDynParams:
    return LogDynParams(j=j, m=m, c=as_fraction(c, "c"), rstar_log=as_fraction(rstar, "rstar_log"))


_line_options = [
    click.option("--j", "j", type=int, required=True, help="t(r) = j·r"),
    click.option("--m", "m", type=int, required=True, help="s(r) = m·r + c"),
    click.option("--c", "c", type=str, required=True, help="有理数 c < 0, 如 -1 或 -3/2"),
    click.option("--rstar", "rstar", type=str, default="-1", show_default=True, help="log r*, 有理数 < 0"),
    click.option("--out", type=click.Path(dir_okay=False), default=None, help="报告输出路径"),
]


def line_options(func: Callable) -> Callable:
    for option in reversed(_line_options):
        func = option(func)
    return func


@lemma.command("commutator")
@line_options
@click.option("--n", "n", type=int, required=True, help="交换子指数 n ≥ 1")
@click.option("--r", "r", type=str, required=True, help="起点 r（有理数）")
@exit_codes
def lemma_commutator(j: int, m: int, c: str, rstar: str, out: Optional[str], n: int, r: str):
    """逐字母求值 t⁻ⁿ∘s⁻ⁿ∘tⁿ∘sⁿ(r) 并与 r − r₀ + dₙ 对照"""
    _lemma_commutator(j, m, c, rstar, n, r, out)


@handle_exceptions(JuliaSeekerException, reraise=True)
def _lemma_commutator(j: int, m: int, c: str, rstar: str, n: int, r: str, out: Optional[str]) -> None:
    started = time.time()
    params = _params(j, m, c, rstar)
    start = as_fraction(r, "r")
    word = LineWord.commutator(n)
    explicit = line_apply(params, word, start)
    closed = commutator_value(params, n, start)
    back = line_apply(params, LineWord.reversed_commutator(n), explicit)
    results = {
        "word": word.to_text(),
        "value": explicit,
        "closed_form": closed,
        "matches_closed_form": explicit == closed,
        "d_n": d_n_value(params, n),
        "r0": params.r0,
        "reversed_value": reversed_commutator_value(params, n, start),
        "inverse_round_trip": back == start,
    }
    _lemma_report("commutator", {**params.to_dict(), "n": n, "r": start}, results, started, out)


@lemma.command("density")
@line_options
@click.option("--r-prime", "r_prime", type=str, required=True, help="种子点 r′ < log r* − r₀")
@click.option("--n-max", "n_max", type=int, default=10, show_default=True, help="最大交换子指数")
@exit_codes
def lemma_density(j: int, m: int, c: str, rstar: str, out: Optional[str], r_prime: str, n_max: int):
    """重放稠密性论证的点列并检查守卫"""
    _lemma_density(j, m, c, rstar, r_prime, n_max, out)


@handle_exceptions(JuliaSeekerException, reraise=True)
def _lemma_density(j: int, m: int, c: str, rstar: str, r_prime: str, n_max: int,
                   out: Optional[str]) -> None:
    started = time.time()
    params = _params(j, m, c, rstar)
    march = density_march(params, as_fraction(r_prime, "r_prime"), n_max)
    bound = d_n_value(params, n_max)
    results = {
        "first_generation": list(march.first_generation),
        "limit_point": march.r_prime - params.r0,
        "point_count": len(march.points),
        "gap_above": march.gap_above(),
        "d_n_max": bound,
        "gap_within_bound": march.gap_above() <= bound,
        "guarded_steps": march.guarded_steps,
        "guard_ok": march.guard_ok,
    }
    _lemma_report("density", {**params.to_dict(), "r_prime": march.r_prime, "n_max": n_max},
                  results, started, out)


@lemma.command("circles")
@click.option("--j", "j", type=int, required=True, help="幂次 j ≥ 2")
@click.option("--delta", type=float, required=True, help="圆弧角宽 (0, 2π]")
@click.option("--radius", type=float, default=0.5, show_default=True, help="圆半径 (0, 1)")
@click.option("--theta", type=float, default=0.0, show_default=True, help="圆弧起始角")
@click.option("--samples", type=int, default=1024, show_default=True, help="圆弧采样点数")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="报告输出路径")
@exit_codes
def lemma_circles(j: int, delta: float, radius: float, theta: float, samples: int, out: Optional[str]):
    """圆弧在 z^{jⁿ} 下展开为整圆"""
    _lemma_circles(j, delta, radius, theta, samples, out)


@handle_exceptions(JuliaSeekerException, reraise=True)
def _lemma_circles(j: int, delta: float, radius: float, theta: float, samples: int,
                   out: Optional[str]) -> None:
    started = time.time()
    report = circle_lemma_check(j, radius, theta, delta, samples)
    params = {"j": j, "delta": delta, "radius": radius, "theta": theta, "samples": samples}
    _lemma_report("circles", params, {"check": report}, started, out)


@lemma.command("monomial")
@click.argument("expression")
@click.option("--radii", callback=_parse_radii, default="0.1,0.25,0.5", show_default=True,
              help="测试圆半径，逗号分隔")
@click.option("--samples", type=int, default=256, show_default=True, help="每个圆的采样点数")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="报告输出路径")
@exit_codes
def lemma_monomial(expression: str, radii: List[float], samples: int, out: Optional[str]):
    """检查把小圆映成同心圆的多项式是否为单项式"""
    _lemma_monomial(expression, radii, samples, out)


@handle_exceptions(JuliaSeekerException, reraise=True)
def _lemma_monomial(expression: str, radii: List[float], samples: int, out: Optional[str]) -> None:
    started = time.time()
    L = parse_poly(expression)
    outcome = monomial_rigidity_check(L, radii, samples)
    results: Dict[str, Any] = {"outcome": outcome}
    if outcome.consistent and outcome.j >= 2:
        results["julia_radius"] = monomial_pair_julia_radius(outcome.a, outcome.j)
    params = {"L": L.format(), "radii": radii, "samples": samples}
    _lemma_report("monomial", params, results, started, out)


def main() -> None:
    cli(obj={})


if __name__ == "__main__":
    main()
