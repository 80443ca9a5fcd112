// Browser entry point; kept separate so modules stay side-effect free.
import { boot } from "./main.js";

if (document.readyState === "loading") {
  window.addEventListener("DOMContentLoaded", boot);
} else {
  boot();
}
