"""
运行配置管理模块
处理CLI运行配置的保存、加载和验证（JSON文件，与命令行参数一一对应）
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field, ValidationError, field_validator

logger = logging.getLogger(__name__)


class RunConfigError(Exception):
    """运行配置相关异常"""
    pass


class RunConfig(BaseModel):
    """运行配置数据模型"""
    gcm: Optional[str] = Field(None, description="GCM文件路径（JSON）")
    levi: Optional[str] = Field(None, description="Δ(P) 的单根下标，如 '0,2'、'maximal:1'；空为Borel")
    max_length: int = Field(4, ge=0, description="不等式枚举的长度界 L_max")
    depth: int = Field(6, ge=1, description="仿射型权重数截断深度 D")
    nmax: int = Field(3, ge=1, description="锥成员判定的最大倍数 N_max")
    height: int = Field(4, ge=1, description="面维数搜索的系数高度")
    out: Optional[str] = Field(None, description="输出文件路径，空为标准输出")
    format: str = Field("json", description="输出格式: json 或 table")
    seed: int = Field(0, ge=0, description="抽样随机种子")

    @field_validator("format")
    @classmethod
    def check_format(cls, value: str) -> str:
        if value not in ("json", "table"):
            raise ValueError(f"不支持的输出格式: {value}")
        return value

    @field_validator("levi")
    @classmethod
    def check_levi(cls, value: Optional[str]) -> Optional[str]:
        if value is None or value.strip() in ("", "borel"):
            return value
        body = value.strip()
        if body.startswith("maximal:"):
            body = body[len("maximal:"):]
        for part in body.split(","):
            if not part.strip().isdigit():
                raise ValueError(f"抛物下标必须是非负整数: {part!r}")
        return value

    def levi_indices(self) -> List[int]:
        if not self.levi or self.levi.strip() in ("", "borel"):
            return []
        body = self.levi.strip()
        if body.startswith("maximal:"):
            body = body[len("maximal:"):]
        return [int(p) for p in body.split(",")]

    def check_rank(self, rank: int):
        """抛物下标必须落在 [0, rank) 内"""
        bad = [i for i in self.levi_indices() if i >= rank]
        if bad:
            raise RunConfigError(f"抛物下标 {bad} 超出秩 {rank}")

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()


class RunConfigManager:
    """运行配置管理器"""

    def load(self, path: Union[str, Path]) -> RunConfig:
        """
        加载运行配置

        Raises:
            RunConfigError: 文件不存在、JSON错误或字段校验失败
        """
        path = Path(path)
        if not path.exists():
            raise RunConfigError(f"配置文件不存在: {path}")
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise RunConfigError(f"配置文件JSON错误 {path}:{e.lineno}:{e.colno}: {e.msg}") from e
        if not isinstance(data, dict):
            raise RunConfigError(f"配置文件顶层必须是对象: {path}")
        try:
            run_config = RunConfig(**data)
        except ValidationError as e:
            raise RunConfigError(f"配置校验失败: {e}") from e
        logger.info(f"运行配置加载成功: {path}")
        return run_config

    def save(self, run_config: RunConfig, path: Union[str, Path]) -> bool:
        """保存运行配置"""
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'w', encoding='utf-8') as f:
                json.dump(run_config.to_dict(), f, ensure_ascii=False, indent=2, sort_keys=True)
            logger.info(f"运行配置保存成功: {path}")
            return True
        except OSError as e:
            logger.error(f"保存运行配置失败: {e}")
            return False

    def update(self, run_config: RunConfig, updates: Dict[str, Any]) -> RunConfig:
        """
        覆盖部分字段（值为None的项忽略），返回新的配置

        Raises:
            RunConfigError: 覆盖后校验失败
        """
        merged = run_config.to_dict()
        merged.update({k: v for k, v in updates.items() if v is not None and k in merged})
        try:
            return RunConfig(**merged)
        except ValidationError as e:
            raise RunConfigError(f"配置校验失败: {e}") from e


# 全局运行配置管理器实例
run_config_manager = RunConfigManager()
