from weyl_lab.features.arc_approx.presentation import commands as arc_approx
from weyl_lab.features.dim_calc.presentation import commands as dim_calc
from weyl_lab.features.discrepancy.presentation import commands as discrepancy
from weyl_lab.features.measure_scan.presentation import commands as measure_scan
from weyl_lab.features.moment_lab.presentation import commands as moment_lab
from weyl_lab.features.panel.presentation import commands as panel
from weyl_lab.features.pattern_cantor.presentation import commands as pattern_cantor
from weyl_lab.features.rep_count.presentation import commands as rep_count
from weyl_lab.features.setting import commands as setting
from weyl_lab.features.weyl_core.presentation import commands as weyl_core
from weyl_lab.presentation.components.command import Command


class CommandFactory:
    """サブコマンドの生成と登録順を担当するクラス"""

    @staticmethod
    def create_commands() -> list[Command]:
        """CLI で使用する全サブコマンドを機能ごとの順で返す"""
        commands: list[Command] = []

        # 和の評価 (eval, batch, flat)
        commands.extend(weyl_core.commands())

        # モーメント (moment2, moment4, momentq, variance)
        commands.extend(moment_lab.commands())

        # 解の個数 (repcount, qcount, powerpairs, profile)
        commands.extend(rep_count.commands())

        # 主弧近似 (cf, osc, vaughan, baker, arcs)
        commands.extend(arc_approx.commands())

        # 次元公式とディスクレパンシー (dims, disc, koksma)
        commands.extend(dim_calc.commands())
        commands.extend(discrepancy.commands())

        # Cantor 構成 (pattern, cantor, dimest, mass)
        commands.extend(pattern_cantor.commands())

        # 測度の走査 (eps0, frac, ladder, cexA)
        commands.extend(measure_scan.commands())

        # パネルと設定
        commands.extend(panel.commands())
        commands.extend(setting.commands())

        names = [c.name for c in commands]
        if len(names) != len(set(names)):
            msg = f"duplicate subcommand names: {sorted(names)}"
            raise ValueError(msg)
        return commands
