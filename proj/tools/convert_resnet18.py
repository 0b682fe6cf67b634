#!/usr/bin/env python3
# Copyright 2026 The m2b Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Exports torchvision ResNet18 weights as a tensor dict readable by m2b.

The output is loaded with net.use_pretrained_visual=true and
net.pretrained_visual_path=<output>.
"""

import argparse

import torch
import torchvision


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("output", help="destination file, e.g. resnet18.pt")
    parser.add_argument("--random", action="store_true",
                        help="export randomly initialised weights (no download)")
    args = parser.parse_args()

    weights = None if args.random else torchvision.models.ResNet18_Weights.IMAGENET1K_V1
    model = torchvision.models.resnet18(weights=weights)
    state = {k: v.detach().clone() for k, v in model.state_dict().items()}
    torch.save(state, args.output)
    print(f"wrote {len(state)} tensors to {args.output}")


if __name__ == "__main__":
    main()
