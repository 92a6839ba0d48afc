// pattern: P7 rec-main
// expected: no-deadlock
package main

import "fmt"

func ping(ch chan int) {
	ch <- 1
	go ping(ch)
}

func main() {
	ch := make(chan int)
	go ping(ch)
	fmt.Println(<-ch)
}
