import { ApiClient } from "./api.js";
import { mountWorkbench } from "./app.js";

const root = document.getElementById("app");
if (root) {
  mountWorkbench(root, new ApiClient(""));
}
